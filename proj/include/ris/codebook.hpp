#pragma once

// Interaction vectors, codebooks, beamforming gain and the reference
// constructors: DFT baseline, equal-gain-combining bound, phase-alignment
// genie and exhaustive search.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ris/phase_grid.hpp"
#include "ris/scenario.hpp"

namespace ris {

/// Length-M vector of grid indices; the implied reflection vector is
/// (1/sqrt(M)) exp(j theta_m). Never materialized as a diagonal matrix.
class InteractionVector {
 public:
  InteractionVector(unsigned bits, std::vector<PhaseIndex> indices);

  /// All elements at phase zero.
  static InteractionVector zeros(unsigned bits, std::size_t elements);

  unsigned bits() const { return bits_; }
  const PhaseGrid& grid() const { return PhaseGrid::of(bits_); }
  std::size_t size() const { return indices_.size(); }
  std::span<const PhaseIndex> indices() const { return indices_; }
  PhaseIndex operator[](std::size_t m) const { return indices_[m]; }

  /// Phase of element m in radians.
  double phase(std::size_t m) const { return grid().value(indices_[m]); }

  bool operator==(const InteractionVector&) const = default;

 private:
  unsigned bits_;
  std::vector<PhaseIndex> indices_;
};

class Codebook {
 public:
  Codebook(unsigned bits, std::size_t elements, std::vector<InteractionVector> beams);

  unsigned bits() const { return bits_; }
  std::size_t elements() const { return elements_; }
  std::size_t size() const { return beams_.size(); }
  std::span<const InteractionVector> beams() const { return beams_; }
  const InteractionVector& operator[](std::size_t n) const { return beams_[n]; }

  bool operator==(const Codebook&) const = default;

 private:
  unsigned bits_;
  std::size_t elements_;
  std::vector<InteractionVector> beams_;
};

/// Unnormalized sum_m c_m exp(j theta_m) over elements [offset, offset + n),
/// with n = phases.size().
Complex rotated_sum(const CompositeChannel& c, std::span<const PhaseIndex> phases,
                    const PhaseGrid& grid, std::size_t offset = 0);

/// (1/M) |sum_m alpha_m exp(j(phi_m + theta_m))|^2 = |c^T psi|^2.
double gain(const CompositeChannel& c, const InteractionVector& psi);

/// Gain of a continuous-phase beam (reporting only; hardware uses grid phases).
double gain(const CompositeChannel& c, std::span<const double> phases);

/// Mean gain over users of one beam.
double mean_gain(std::span<const CompositeChannel> users, const InteractionVector& psi);

/// Mean over users of the best beam's gain.
double codebook_objective(const Codebook& codebook, std::span<const CompositeChannel> users);

/// Index of the best beam for a user (first on ties).
std::size_t best_beam(const Codebook& codebook, const CompositeChannel& user);

/// N-beam DFT codebook; beam n has ideal phases wrap(-2 pi m n / N)
/// (0-based m, n), rounded to the nearest grid value with ties toward the
/// smaller index. The rounding is done in exact integer arithmetic.
Codebook dft_codebook(std::size_t elements, std::size_t beams, const PhaseGrid& grid);

/// The unquantized DFT phases, beam-major.
std::vector<std::vector<double>> dft_phases(std::size_t elements, std::size_t beams);

/// Objective of the unquantized DFT codebook.
double dft_ideal_objective(std::size_t beams, std::span<const CompositeChannel> users);

/// (1/M) (sum_m alpha_m)^2, the gain under perfect continuous co-phasing.
double egc_upper_bound(const CompositeChannel& c);

/// Genie with channel knowledge: for each grid offset phi_u, theta_m =
/// nearest(phi_u - phi_m); returns the best candidate. Offsets are scanned
/// 0, 2 pi / 2^q, 4 pi / 2^q, ... and the first one wins ties.
InteractionVector aligned_oracle(const CompositeChannel& c, const PhaseGrid& grid);

inline constexpr std::uint64_t kDefaultSearchLimit = std::uint64_t{1} << 20;

struct SearchResult {
  InteractionVector vector;
  double mean_gain;
};

/// Global maximizer of the mean gain over users by enumerating all (2^q)^M
/// vectors. Refuses with SearchLimitError when the count exceeds `limit`.
SearchResult exhaustive_search(std::span<const CompositeChannel> users, std::size_t elements,
                               const PhaseGrid& grid, std::uint64_t limit = kDefaultSearchLimit);

// Codebook files: JSON {format_version, M, N, q, beams}, beams as 1-based
// index arrays into the grid enumeration.
inline constexpr int kCodebookFormatVersion = 1;
std::string serialize_codebook(const Codebook& codebook);
Codebook parse_codebook(const std::string& text);
void write_codebook(const std::filesystem::path& path, const Codebook& codebook);
Codebook read_codebook(const std::filesystem::path& path);

}  // namespace ris
