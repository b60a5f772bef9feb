#include "ris/error.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>

namespace ris {

namespace {
std::atomic<bool> g_warnings{true};
std::mutex g_seen_mutex;
std::set<std::string> g_seen;
}  // namespace

void warn(const std::string& message) {
  if (!g_warnings.load(std::memory_order_relaxed)) return;
  std::lock_guard<std::mutex> lock(g_seen_mutex);
  if (!g_seen.insert(message).second) return;
  std::cerr << "warning: " << message << '\n';
}

void set_warnings_enabled(bool enabled) { g_warnings.store(enabled); }

bool warnings_enabled() { return g_warnings.load(); }

}  // namespace ris
