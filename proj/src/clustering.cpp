#include "ris/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ris/checkpoint.hpp"
#include "ris/error.hpp"
#include "ris/rng.hpp"

namespace ris {

Codebook sensing_codebook(std::size_t elements, std::size_t beams, const PhaseGrid& grid,
                          std::uint64_t seed) {
  if (beams == 0) throw ConfigError("sensing codebook needs at least one beam");
  Rng rng(derive_seed(seed, "sensing"));
  std::uniform_int_distribution<PhaseIndex> pick(0, grid.size() - 1);
  std::vector<InteractionVector> out;
  out.reserve(beams);
  for (std::size_t s = 0; s < beams; ++s) {
    std::vector<PhaseIndex> idx(elements);
    for (auto& i : idx) i = pick(rng);
    out.emplace_back(grid.bits(), std::move(idx));
  }
  return Codebook(grid.bits(), elements, std::move(out));
}

PowerFeatureMatrix::PowerFeatureMatrix(std::size_t users, std::size_t beams)
    : users_(users), beams_(beams), data_(users * beams, 0.0) {}

PowerFeatureMatrix power_features(std::span<const CompositeChannel> users,
                                  const Codebook& sensing, const MeasurementNoise& noise) {
  PowerFeatureMatrix out(users.size(), sensing.size());
  Rng rng(derive_seed(noise.seed, "measurement"));
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t u = 0; u < users.size(); ++u) {
    if (users[u].size() != sensing.elements()) {
      throw DimensionError("power features: user " + std::to_string(u) + " has " +
                           std::to_string(users[u].size()) + " elements, sensing beams have " +
                           std::to_string(sensing.elements()));
    }
    for (std::size_t s = 0; s < sensing.size(); ++s) {
      double p = gain(users[u], sensing[s]);
      if (noise.relative_sigma > 0.0) p *= std::max(0.0, 1.0 + noise.relative_sigma * normal(rng));
      out(u, s) = p;
    }
  }
  return out;
}

std::vector<std::size_t> ClusterAssignment::members(std::size_t k) const {
  std::vector<std::size_t> out;
  for (std::size_t u = 0; u < labels.size(); ++u) {
    if (labels[u] == k) out.push_back(u);
  }
  return out;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double x = a[i] - b[i];
    d += x * x;
  }
  return d;
}

}  // namespace

ClusterAssignment cluster_users(const PowerFeatureMatrix& features, std::size_t clusters,
                                std::uint64_t seed, const KMeansOptions& options) {
  const std::size_t n = features.users();
  const std::size_t dim = features.beams();
  if (clusters == 0) throw ConfigError("cluster count must be >= 1");
  if (clusters > n) {
    throw ConfigError("cannot form " + std::to_string(clusters) + " clusters from " +
                      std::to_string(n) + " users");
  }

  // Unit-norm rows: cluster by direction, not received-power level.
  std::vector<std::vector<double>> x(n, std::vector<double>(dim));
  for (std::size_t u = 0; u < n; ++u) {
    const auto row = features.row(u);
    double norm = 0.0;
    for (double v : row) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t s = 0; s < dim; ++s) x[u][s] = norm > 0.0 ? row[s] / norm : 0.0;
  }

  ClusterAssignment out;
  out.labels.assign(n, 0);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

  // Farthest-point seeding.
  Rng rng(derive_seed(seed, "kmeans"));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  out.centroids.push_back(x[pick(rng)]);
  while (out.centroids.size() < clusters) {
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t u = 0; u < n; ++u) {
      nearest[u] = std::min(nearest[u], squared_distance(x[u], out.centroids.back()));
      if (nearest[u] > far_d) {
        far_d = nearest[u];
        far = u;
      }
    }
    out.centroids.push_back(x[far]);
  }

  auto assign = [&]() {
    double total = 0.0;
    for (std::size_t u = 0; u < n; ++u) {
      std::size_t best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < clusters; ++k) {
        const double d = squared_distance(x[u], out.centroids[k]);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      out.labels[u] = best;
      nearest[u] = best_d;
      total += best_d;
    }
    return total;
  };

  double objective = assign();
  out.objective_history.push_back(objective);
  for (std::size_t it = 0; it < options.max_iterations; ++it) {
    // Update step.
    std::vector<std::vector<double>> sums(clusters, std::vector<double>(dim, 0.0));
    std::vector<std::size_t> counts(clusters, 0);
    for (std::size_t u = 0; u < n; ++u) {
      ++counts[out.labels[u]];
      for (std::size_t s = 0; s < dim; ++s) sums[out.labels[u]][s] += x[u][s];
    }
    for (std::size_t k = 0; k < clusters; ++k) {
      if (counts[k] == 0) {
        // Re-seed from the point farthest from its current center.
        const auto far = static_cast<std::size_t>(
            std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
        out.centroids[k] = x[far];
        nearest[far] = 0.0;
        ++out.reseeded;
        warn("k-means: cluster " + std::to_string(k + 1) + " empty, re-seeded from user " +
             std::to_string(far + 1));
        continue;
      }
      for (std::size_t s = 0; s < dim; ++s) {
        out.centroids[k][s] = sums[k][s] / static_cast<double>(counts[k]);
      }
    }
    const auto previous = out.labels;
    objective = assign();
    out.objective_history.push_back(objective);
    out.iterations = it + 1;
    if (out.labels == previous) break;
  }
  return out;
}

std::string assignment_csv(const ClusterAssignment& a, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "user_id,cluster_id\n";
  for (std::size_t u = 0; u < a.labels.size(); ++u) {
    out += std::to_string(u + 1) + ',' + std::to_string(a.labels[u] + 1) + '\n';
  }
  return out;
}

std::string centroids_csv(const ClusterAssignment& a, const std::string& comment) {
  std::string out;
  if (!comment.empty()) out += "# " + comment + "\n";
  out += "cluster_id";
  const std::size_t dim = a.centroids.empty() ? 0 : a.centroids.front().size();
  for (std::size_t s = 0; s < dim; ++s) out += ",f" + std::to_string(s + 1);
  out += '\n';
  for (std::size_t k = 0; k < a.centroids.size(); ++k) {
    out += std::to_string(k + 1);
    for (double v : a.centroids[k]) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace ris
