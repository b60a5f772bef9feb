#pragma once

// User clustering from receive-power features measured with random sensing
// beams; no channel state information is used.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ris/codebook.hpp"

namespace ris {

/// S beams with i.i.d. uniform grid phases, deterministic per seed.
Codebook sensing_codebook(std::size_t elements, std::size_t beams, const PhaseGrid& grid,
                          std::uint64_t seed);

/// Rows = users, columns = sensing beams, entry = received power (gain).
class PowerFeatureMatrix {
 public:
  PowerFeatureMatrix(std::size_t users, std::size_t beams);

  std::size_t users() const { return users_; }
  std::size_t beams() const { return beams_; }
  double& operator()(std::size_t u, std::size_t s) { return data_[u * beams_ + s]; }
  double operator()(std::size_t u, std::size_t s) const { return data_[u * beams_ + s]; }
  std::span<const double> row(std::size_t u) const {
    return std::span<const double>(data_).subspan(u * beams_, beams_);
  }

 private:
  std::size_t users_;
  std::size_t beams_;
  std::vector<double> data_;
};

struct MeasurementNoise {
  double relative_sigma = 0.0;  // power *= max(0, 1 + sigma * N(0, 1))
  std::uint64_t seed = 0;
};

PowerFeatureMatrix power_features(std::span<const CompositeChannel> users,
                                  const Codebook& sensing, const MeasurementNoise& noise = {});

struct ClusterAssignment {
  std::vector<std::size_t> labels;                // 0-based cluster per user
  std::vector<std::vector<double>> centroids;     // in normalized feature space
  std::vector<double> objective_history;          // within-cluster sum of squares per iteration
  std::size_t iterations = 0;
  std::size_t reseeded = 0;                       // empty clusters re-seeded

  std::size_t clusters() const { return centroids.size(); }
  /// Users of cluster k, ascending.
  std::vector<std::size_t> members(std::size_t k) const;
};

struct KMeansOptions {
  std::size_t max_iterations = 100;
};

/// k-means on unit-norm feature rows with farthest-point seeding (the first
/// center is drawn with the seed). Throws ConfigError if clusters > users.
ClusterAssignment cluster_users(const PowerFeatureMatrix& features, std::size_t clusters,
                                std::uint64_t seed, const KMeansOptions& options = {});

/// CSV user_id,cluster_id (both 1-based).
std::string assignment_csv(const ClusterAssignment& assignment, const std::string& comment = "");
/// CSV cluster_id,f1..fS.
std::string centroids_csv(const ClusterAssignment& assignment, const std::string& comment = "");

}  // namespace ris
