#pragma once

// Experiment configuration: one JSON document plus command-line overrides.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ris/agent.hpp"
#include "ris/multilevel.hpp"
#include "ris/scenario.hpp"

namespace ris {

struct BaselineConfig {
  std::size_t dft_size = 16;
  bool oracle = true;
  bool exhaustive = false;  // per-user exhaustive optimum (small M only)
  std::uint64_t exhaustive_limit = std::uint64_t{1} << 20;
};

struct ClusteringConfig {
  std::size_t sensing_beams = 32;
  double measurement_noise = 0.0;
  std::size_t max_iterations = 100;
};

struct ExperimentConfig {
  std::optional<ScenarioSpec> scenario;
  std::optional<std::filesystem::path> channels_file;
  unsigned q = 3;
  std::vector<std::size_t> levels;  // empty: a single level of size M
  std::size_t beams = 4;
  AgentConfig agent;
  std::vector<std::size_t> level_budgets;
  bool learn = true;
  bool transfer = true;
  BaselineConfig baselines;
  ClusteringConfig clustering;
  std::uint64_t seed = 1;
  std::size_t threads = 1;

  void validate() const;
};

ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

/// Relative channel paths are resolved against `base_dir`.
ExperimentConfig config_from_json(const nlohmann::json& j,
                                  const std::filesystem::path& base_dir = {});
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::filesystem::path& path);

/// 16 hex digits identifying the configuration (hash of its canonical JSON).
std::string config_hash(const ExperimentConfig& config);

}  // namespace ris
