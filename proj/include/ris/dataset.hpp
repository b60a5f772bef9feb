#pragma once

// Channel dataset files: JSON text with a header (format_version, M,
// num_users, q_hint, seed, geometry) and one [re, im] pair array per user.
// Doubles are written in shortest round-trip form, so export followed by
// import reproduces every coefficient bit for bit.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ris/scenario.hpp"

namespace ris {

inline constexpr int kChannelFormatVersion = 1;

struct ChannelDataset {
  SurfaceGeometry geometry = SurfaceGeometry::ula(1);
  std::vector<CompositeChannel> users;
  std::optional<Channel> transmitter;
  std::vector<std::size_t> labels;  // optional ground-truth cluster per user
  std::uint64_t seed = 0;
  unsigned q_hint = 0;
};

ChannelDataset to_dataset(const ScenarioData& data, unsigned q_hint = 0);

std::string serialize_channels(const ChannelDataset& dataset);
ChannelDataset parse_channels(const std::string& text);

void export_channels(const std::filesystem::path& path, const ChannelDataset& dataset);
ChannelDataset import_channels(const std::filesystem::path& path);

}  // namespace ris
