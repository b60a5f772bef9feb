#pragma once

// End-to-end experiment: channels -> clustering -> per-cluster multi-level
// learning -> codebook -> baselines, plus the artifacts written to disk.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ris/clustering.hpp"
#include "ris/codebook.hpp"
#include "ris/config.hpp"
#include "ris/dataset.hpp"
#include "ris/learner.hpp"

namespace ris {

struct ClusterResult {
  std::vector<std::size_t> members;  // 0-based user indices
  LearnedResult learned;
  double objective = 0.0;  // mean gain of the learned beam over the members
};

struct ResultBundle {
  ExperimentConfig config;
  std::string config_hash;
  ChannelDataset dataset;
  std::optional<ClusterAssignment> assignment;  // absent when learning is disabled
  std::vector<ClusterResult> clusters;
  Codebook codebook{1, 1, {InteractionVector::zeros(1, 1)}};  // learned, or DFT when not learning

  std::optional<double> learned_objective;
  double dft_objective = 0.0;  // quantized, baselines.dft_size beams
  double dft_ideal_objective = 0.0;
  std::optional<double> aligned_mean;
  double egc_mean = 0.0;
  std::optional<double> exhaustive_mean;  // per-user exhaustive optimum, when enabled
  bool sanity_ok = true;

  std::vector<std::pair<std::string, double>> timings;  // seconds per stage
};

/// Builds the channel dataset described by the config (generated scenario or
/// imported file).
ChannelDataset load_channels(const ExperimentConfig& config);

/// Any failure is rethrown as StageError naming the stage.
ResultBundle run_pipeline(const ExperimentConfig& config);
/// Same, on an already loaded dataset.
ResultBundle run_pipeline(const ExperimentConfig& config, ChannelDataset dataset);

/// results.csv: a "# config_hash=" line, then metric,value rows.
std::string results_csv(const ResultBundle& bundle);
std::string timings_csv(const ResultBundle& bundle);
/// trace_<cluster>_<level>.csv body: group,iteration,gain,best_gain,reward,loss.
std::string level_trace_csv(const ResultBundle& bundle, std::size_t cluster, std::size_t level);

/// Writes every artifact of the bundle into `dir` (created if needed).
/// Returns the paths written.
std::vector<std::filesystem::path> write_bundle(const ResultBundle& bundle,
                                                const std::filesystem::path& dir);

struct SweepRow {
  std::size_t beams = 0;
  double learned = 0.0;
  double dft = 0.0;  // quantized DFT codebook with the same number of beams
  double egc = 0.0;
};

std::vector<SweepRow> sweep_codebook_size(const ExperimentConfig& config,
                                          const std::vector<std::size_t>& sizes);
std::string sweep_csv(const std::vector<SweepRow>& rows, const std::string& config_hash);
void write_sweep_plot(const std::filesystem::path& path, const std::vector<SweepRow>& rows);

struct OracleRow {
  std::size_t user = 0;  // 0-based
  double egc = 0.0;
  InteractionVector aligned;
  double aligned_gain = 0.0;
  std::optional<InteractionVector> exhaustive;
  double exhaustive_gain = 0.0;
};

/// Per-user oracles. With `exhaustive` set, throws SearchLimitError before any
/// work if (2^q)^M exceeds `limit`.
std::vector<OracleRow> run_oracles(const std::vector<CompositeChannel>& users, unsigned bits,
                                   bool exhaustive, std::uint64_t limit);
std::string oracle_report_json(const std::vector<OracleRow>& rows, unsigned bits);

}  // namespace ris
