#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace ris {

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// 64-bit FNV-1a over raw bytes.
std::uint64_t fnv1a(std::string_view bytes);

/// Derives an independent stream seed from a master seed, a stage name and a
/// tuple of task coordinates (cluster, level, group, ...). The result depends
/// only on its arguments, so task execution order never changes results.
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage,
                          std::initializer_list<std::uint64_t> coords = {});

}  // namespace ris
