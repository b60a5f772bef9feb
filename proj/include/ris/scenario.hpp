#pragma once

// Surface geometries, multipath channels (stationary and visibility-limited),
// composite channels and the synthetic clustered-user scenario generator.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ris {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Reduces an angle to (-pi, pi].
double wrap_angle(double radians);

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

struct SubSurface {
  std::size_t start = 0;  // 0-based first element
  std::size_t size = 0;
};

/// Element positions in wavelength units, partitioned into contiguous
/// sub-surfaces that together cover every element exactly once.
class SurfaceGeometry {
 public:
  SurfaceGeometry(std::vector<Position> elements, std::vector<SubSurface> subsurfaces);

  /// Uniform linear array along the y axis with the given spacing (wavelengths).
  static SurfaceGeometry ula(std::size_t elements, double spacing = 0.5);

  /// `surfaces` collinear ULAs along y, each with `per_surface` elements,
  /// separated by `gap` wavelengths between neighbouring end elements.
  static SurfaceGeometry distributed_ula(std::size_t surfaces, std::size_t per_surface, double gap,
                                         double spacing = 0.5);

  std::size_t size() const { return elements_.size(); }
  std::span<const Position> elements() const { return elements_; }
  std::span<const SubSurface> subsurfaces() const { return subsurfaces_; }

  bool operator==(const SurfaceGeometry&) const;

 private:
  std::vector<Position> elements_;
  std::vector<SubSurface> subsurfaces_;
};

inline bool operator==(const Position& a, const Position& b) {
  return a.x == b.x && a.y == b.y && a.z == b.z;
}
inline bool operator==(const SubSurface& a, const SubSurface& b) {
  return a.start == b.start && a.size == b.size;
}

struct PathComponent {
  Complex gain;  // linear amplitude
  double aoa;    // radians, (-pi, pi]
};

/// Closed interval of angles, in radians.
struct AngleInterval {
  double min = -kPi;
  double max = kPi;
  bool contains(double angle) const { return angle >= min && angle <= max; }
};

/// Per-element seeable-AoA intervals.
class VisibilityRegion {
 public:
  explicit VisibilityRegion(std::vector<AngleInterval> intervals);

  /// Every element sees every angle.
  static VisibilityRegion full(std::size_t elements);

  std::size_t size() const { return intervals_.size(); }
  const AngleInterval& operator[](std::size_t m) const { return intervals_[m]; }
  std::span<const AngleInterval> intervals() const { return intervals_; }
  bool visible(std::size_t m, double aoa) const { return intervals_[m].contains(aoa); }

 private:
  std::vector<AngleInterval> intervals_;
};

/// Length-M complex channel vector with finite entries.
class Channel {
 public:
  Channel() = default;
  explicit Channel(std::vector<Complex> coefficients);

  std::size_t size() const { return coefficients_.size(); }
  std::span<const Complex> coefficients() const { return coefficients_; }
  const Complex& operator[](std::size_t m) const { return coefficients_[m]; }
  bool operator==(const Channel&) const = default;

 private:
  std::vector<Complex> coefficients_;
};

/// Elementwise product h_T * h_R with cached split (re/im) and polar views.
/// Immutable; the only channel object the optimizers consume.
class CompositeChannel {
 public:
  CompositeChannel() = default;
  explicit CompositeChannel(std::vector<Complex> coefficients);

  std::size_t size() const { return coefficients_.size(); }
  std::span<const Complex> coefficients() const { return coefficients_; }
  const Complex& operator[](std::size_t m) const { return coefficients_[m]; }

  std::span<const double> real() const { return re_; }
  std::span<const double> imag() const { return im_; }
  /// alpha_m >= 0
  std::span<const double> magnitude() const { return magnitude_; }
  /// phi_m in (-pi, pi]
  std::span<const double> phase() const { return phase_; }

  /// Composite channel of the contiguous element range [offset, offset + count).
  CompositeChannel slice(std::size_t offset, std::size_t count) const;

  bool operator==(const CompositeChannel& other) const {
    return coefficients_ == other.coefficients_;
  }

 private:
  std::vector<Complex> coefficients_;
  std::vector<double> re_;
  std::vector<double> im_;
  std::vector<double> magnitude_;
  std::vector<double> phase_;
};

/// Planar-wave response: entry m = exp(j 2 pi <p_m, (cos aoa, sin aoa, 0)>).
Channel array_response(const SurfaceGeometry& geometry, double aoa);

/// Sum over paths of indicator * gain * response; with no visibility region
/// every indicator is one.
Channel generate_channel(const SurfaceGeometry& geometry, std::span<const PathComponent> paths,
                         const VisibilityRegion* visibility = nullptr);

/// Restriction of generate_channel to the element range [offset, offset + count).
std::vector<Complex> generate_channel_range(const SurfaceGeometry& geometry,
                                            std::span<const PathComponent> paths,
                                            const VisibilityRegion* visibility, std::size_t offset,
                                            std::size_t count);

CompositeChannel composite_channel(const Channel& transmitter, const Channel& receiver);

// ---------------------------------------------------------------------------
// Synthetic scenario

/// A group of users whose paths arrive around a common direction.
struct ClusterSpec {
  double aoa_center = 0.0;      // radians
  double user_spread = 0.05;    // std-dev of each user's mean AoA about the center
  double path_spread = 0.02;    // std-dev of path AoAs about the user's mean AoA
  double power = 1.0;           // total mean path power
  double path_decay = 0.5;      // mean power ratio between consecutive paths
  std::size_t users = 1;
  std::size_t paths = 5;
  // Users share the cluster's scatterers: one path set per cluster (per
  // sub-surface when non-stationary), rotated by each user's AoA offset.
  bool shared_paths = false;
  // With shared paths, per-user relative complex perturbation of each
  // path gain (std-dev).
  double gain_jitter = 0.0;
};

/// Paths between the transmitter and the surface.
struct TransmitterSpec {
  double aoa_center = 0.0;
  double path_spread = 0.02;
  double power = 1.0;
  double path_decay = 0.5;
  std::size_t paths = 1;
};

struct VisibilitySpec {
  enum class Mode { kNone, kPerElement, kPerSubsurface };
  Mode mode = Mode::kNone;
  // One interval per element (kPerElement) or per sub-surface (kPerSubsurface).
  std::vector<AngleInterval> intervals;
};

struct ScenarioSpec {
  SurfaceGeometry geometry = SurfaceGeometry::ula(1);
  TransmitterSpec transmitter;
  std::vector<ClusterSpec> clusters;
  VisibilitySpec visibility;
  // Draw independent path sets for every sub-surface (distributed surfaces).
  bool nonstationary = false;
  std::uint64_t seed = 0;
  // Link-budget metadata; not used by any optimizer.
  double transmit_power = 1.0;
  double noise_variance = 0.0;
};

struct ScenarioData {
  SurfaceGeometry geometry = SurfaceGeometry::ula(1);
  Channel transmitter;
  std::vector<CompositeChannel> users;
  std::vector<std::size_t> labels;  // generating cluster per user (0-based)
  std::uint64_t seed = 0;
};

/// Expands the spec into the visibility region it describes (nullopt for kNone).
std::optional<VisibilityRegion> make_visibility(const ScenarioSpec& spec);

/// Deterministic given the spec (seed included).
ScenarioData generate_scenario(const ScenarioSpec& spec);

}  // namespace ris
