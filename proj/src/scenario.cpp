#include "ris/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ris/error.hpp"
#include "ris/rng.hpp"

namespace ris {

double wrap_angle(double radians) {
  if (radians > -kPi && radians <= kPi) return radians;
  double r = std::remainder(radians, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r += kTwoPi;
  return r;
}

// ---------------------------------------------------------------------------

SurfaceGeometry::SurfaceGeometry(std::vector<Position> elements,
                                 std::vector<SubSurface> subsurfaces)
    : elements_(std::move(elements)), subsurfaces_(std::move(subsurfaces)) {
  if (elements_.empty()) throw ConfigError("surface geometry needs at least one element");
  if (subsurfaces_.empty()) subsurfaces_.push_back({0, elements_.size()});
  std::size_t next = 0;
  for (const auto& s : subsurfaces_) {
    if (s.size == 0) throw ConfigError("sub-surface of size zero");
    if (s.start != next) {
      throw ConfigError("sub-surfaces must be contiguous and disjoint (expected start " +
                        std::to_string(next) + ", got " + std::to_string(s.start) + ")");
    }
    next += s.size;
  }
  if (next != elements_.size()) {
    throw ConfigError("sub-surface sizes sum to " + std::to_string(next) + " but geometry has " +
                      std::to_string(elements_.size()) + " elements");
  }
}

SurfaceGeometry SurfaceGeometry::ula(std::size_t elements, double spacing) {
  std::vector<Position> pos(elements);
  for (std::size_t m = 0; m < elements; ++m) pos[m] = {0.0, spacing * static_cast<double>(m), 0.0};
  return SurfaceGeometry(std::move(pos), {});
}

SurfaceGeometry SurfaceGeometry::distributed_ula(std::size_t surfaces, std::size_t per_surface,
                                                 double gap, double spacing) {
  if (surfaces == 0 || per_surface == 0) throw ConfigError("distributed ULA needs elements");
  std::vector<Position> pos;
  std::vector<SubSurface> subs;
  pos.reserve(surfaces * per_surface);
  double y = 0.0;
  for (std::size_t s = 0; s < surfaces; ++s) {
    subs.push_back({pos.size(), per_surface});
    for (std::size_t m = 0; m < per_surface; ++m) {
      pos.push_back({0.0, y, 0.0});
      if (m + 1 < per_surface) y += spacing;
    }
    y += gap;
  }
  return SurfaceGeometry(std::move(pos), std::move(subs));
}

bool SurfaceGeometry::operator==(const SurfaceGeometry& other) const {
  return elements_ == other.elements_ && subsurfaces_ == other.subsurfaces_;
}

// ---------------------------------------------------------------------------

VisibilityRegion::VisibilityRegion(std::vector<AngleInterval> intervals)
    : intervals_(std::move(intervals)) {
  for (std::size_t m = 0; m < intervals_.size(); ++m) {
    if (!(intervals_[m].min <= intervals_[m].max)) {
      throw ConfigError("visibility interval of element " + std::to_string(m) +
                        " has min > max");
    }
  }
}

VisibilityRegion VisibilityRegion::full(std::size_t elements) {
  return VisibilityRegion(std::vector<AngleInterval>(elements, AngleInterval{-kPi, kPi}));
}

// ---------------------------------------------------------------------------

Channel::Channel(std::vector<Complex> coefficients) : coefficients_(std::move(coefficients)) {
  for (std::size_t m = 0; m < coefficients_.size(); ++m) {
    if (!std::isfinite(coefficients_[m].real()) || !std::isfinite(coefficients_[m].imag())) {
      throw ValidationError("non-finite channel coefficient at element " + std::to_string(m));
    }
  }
}

CompositeChannel::CompositeChannel(std::vector<Complex> coefficients)
    : coefficients_(std::move(coefficients)) {
  const std::size_t n = coefficients_.size();
  re_.resize(n);
  im_.resize(n);
  magnitude_.resize(n);
  phase_.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const Complex c = coefficients_[m];
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw ValidationError("non-finite composite coefficient at element " + std::to_string(m));
    }
    re_[m] = c.real();
    im_[m] = c.imag();
    magnitude_[m] = std::abs(c);
    phase_[m] = wrap_angle(std::arg(c));
  }
}

CompositeChannel CompositeChannel::slice(std::size_t offset, std::size_t count) const {
  if (offset + count > size()) throw DimensionError("composite channel slice out of range");
  return CompositeChannel(std::vector<Complex>(coefficients_.begin() + offset,
                                               coefficients_.begin() + offset + count));
}

// ---------------------------------------------------------------------------

namespace {

Complex response_entry(const Position& p, double cos_a, double sin_a) {
  const double projection = p.x * cos_a + p.y * sin_a;
  // Reduce the projection modulo one wavelength first so the phase stays
  // accurate for large apertures.
  const double frac = projection - std::round(projection);
  return std::polar(1.0, kTwoPi * frac);
}

}  // namespace

Channel array_response(const SurfaceGeometry& geometry, double aoa) {
  const double c = std::cos(aoa);
  const double s = std::sin(aoa);
  std::vector<Complex> out(geometry.size());
  const auto elems = geometry.elements();
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = response_entry(elems[m], c, s);
  return Channel(std::move(out));
}

std::vector<Complex> generate_channel_range(const SurfaceGeometry& geometry,
                                            std::span<const PathComponent> paths,
                                            const VisibilityRegion* visibility, std::size_t offset,
                                            std::size_t count) {
  if (visibility != nullptr && visibility->size() != geometry.size()) {
    throw DimensionError("visibility region has " + std::to_string(visibility->size()) +
                         " entries but geometry has " + std::to_string(geometry.size()) +
                         " elements");
  }
  if (offset + count > geometry.size()) throw DimensionError("element range out of geometry");
  std::vector<Complex> out(count, Complex{0.0, 0.0});
  const auto elems = geometry.elements();
  for (const auto& path : paths) {
    const double c = std::cos(path.aoa);
    const double s = std::sin(path.aoa);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t m = offset + i;
      if (visibility != nullptr && !visibility->visible(m, path.aoa)) continue;
      out[i] += path.gain * response_entry(elems[m], c, s);
    }
  }
  return out;
}

Channel generate_channel(const SurfaceGeometry& geometry, std::span<const PathComponent> paths,
                         const VisibilityRegion* visibility) {
  return Channel(generate_channel_range(geometry, paths, visibility, 0, geometry.size()));
}

CompositeChannel composite_channel(const Channel& transmitter, const Channel& receiver) {
  if (transmitter.size() != receiver.size()) {
    throw DimensionError("composite channel: lengths " + std::to_string(transmitter.size()) +
                         " and " + std::to_string(receiver.size()) + " differ");
  }
  std::vector<Complex> out(transmitter.size());
  for (std::size_t m = 0; m < out.size(); ++m) out[m] = transmitter[m] * receiver[m];
  return CompositeChannel(std::move(out));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<double> power_profile(std::size_t paths, double total, double decay) {
  std::vector<double> w(paths);
  double sum = 0.0;
  double p = 1.0;
  for (std::size_t l = 0; l < paths; ++l) {
    w[l] = p;
    sum += p;
    p *= decay;
  }
  for (double& x : w) x *= total / sum;
  return w;
}

std::vector<PathComponent> draw_paths(Rng& rng, double mean_aoa, double spread, double power,
                                      double decay, std::size_t count) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto profile = power_profile(count, power, decay);
  std::vector<PathComponent> paths(count);
  for (std::size_t l = 0; l < count; ++l) {
    const double aoa = wrap_angle(mean_aoa + spread * normal(rng));
    // CN(0, profile[l]): each quadrature has variance profile[l] / 2.
    const double sigma = std::sqrt(profile[l] / 2.0);
    const double re = sigma * normal(rng);
    const double im = sigma * normal(rng);
    paths[l] = {Complex{re, im}, aoa};
  }
  return paths;
}

void validate(const ScenarioSpec& spec) {
  if (spec.geometry.size() == 0) throw ConfigError("scenario has zero elements");
  if (spec.clusters.empty()) throw ConfigError("scenario needs at least one cluster");
  std::size_t users = 0;
  for (const auto& c : spec.clusters) {
    if (c.paths == 0) throw ConfigError("cluster with zero paths");
    if (c.user_spread < 0.0 || c.path_spread < 0.0) throw ConfigError("negative angular spread");
    if (c.power < 0.0) throw ConfigError("negative cluster power");
    if (c.gain_jitter < 0.0) throw ConfigError("negative gain jitter");
    users += c.users;
  }
  if (users == 0) throw ConfigError("scenario has zero users");
  if (spec.transmitter.paths == 0) throw ConfigError("transmitter with zero paths");
}

}  // namespace

std::optional<VisibilityRegion> make_visibility(const ScenarioSpec& spec) {
  const auto& vis = spec.visibility;
  const std::size_t m = spec.geometry.size();
  switch (vis.mode) {
    case VisibilitySpec::Mode::kNone:
      return std::nullopt;
    case VisibilitySpec::Mode::kPerElement:
      if (vis.intervals.size() != m) {
        throw DimensionError("per-element visibility needs " + std::to_string(m) +
                             " intervals, got " + std::to_string(vis.intervals.size()));
      }
      return VisibilityRegion(vis.intervals);
    case VisibilitySpec::Mode::kPerSubsurface: {
      const auto subs = spec.geometry.subsurfaces();
      if (vis.intervals.size() != subs.size()) {
        throw DimensionError("per-subsurface visibility needs " + std::to_string(subs.size()) +
                             " intervals, got " + std::to_string(vis.intervals.size()));
      }
      std::vector<AngleInterval> per_element(m);
      for (std::size_t s = 0; s < subs.size(); ++s) {
        std::fill_n(per_element.begin() + static_cast<std::ptrdiff_t>(subs[s].start),
                    subs[s].size, vis.intervals[s]);
      }
      return VisibilityRegion(std::move(per_element));
    }
  }
  return std::nullopt;
}

ScenarioData generate_scenario(const ScenarioSpec& spec) {
  validate(spec);
  const auto visibility = make_visibility(spec);
  const VisibilityRegion* vis = visibility ? &*visibility : nullptr;
  const auto& geometry = spec.geometry;
  const auto subs = geometry.subsurfaces();
  // Stationary channels use one path set for the whole aperture.
  const std::size_t draws = spec.nonstationary ? subs.size() : 1;

  Rng rng(derive_seed(spec.seed, "scenario"));
  std::normal_distribution<double> normal(0.0, 1.0);

  const auto& tx = spec.transmitter;
  std::vector<Complex> h_t(geometry.size());
  for (std::size_t d = 0; d < draws; ++d) {
    const auto paths =
        draw_paths(rng, tx.aoa_center, tx.path_spread, tx.power, tx.path_decay, tx.paths);
    const std::size_t offset = spec.nonstationary ? subs[d].start : 0;
    const std::size_t count = spec.nonstationary ? subs[d].size : geometry.size();
    const auto part = generate_channel_range(geometry, paths, vis, offset, count);
    std::copy(part.begin(), part.end(), h_t.begin() + static_cast<std::ptrdiff_t>(offset));
  }
  ScenarioData out;
  out.geometry = geometry;
  out.transmitter = Channel(std::move(h_t));
  out.seed = spec.seed;

  for (std::size_t c = 0; c < spec.clusters.size(); ++c) {
    const auto& cl = spec.clusters[c];
    std::vector<std::vector<PathComponent>> shared;
    if (cl.shared_paths) {
      for (std::size_t d = 0; d < draws; ++d) {
        shared.push_back(
            draw_paths(rng, cl.aoa_center, cl.path_spread, cl.power, cl.path_decay, cl.paths));
      }
    }
    for (std::size_t u = 0; u < cl.users; ++u) {
      const double offset_aoa = cl.user_spread * normal(rng);
      const double user_aoa = wrap_angle(cl.aoa_center + offset_aoa);
      std::vector<Complex> h_r(geometry.size());
      for (std::size_t d = 0; d < draws; ++d) {
        std::vector<PathComponent> paths;
        if (cl.shared_paths) {
          paths = shared[d];
          for (auto& p : paths) {
            p.aoa = wrap_angle(p.aoa + offset_aoa);
            const double re = cl.gain_jitter * normal(rng) / std::sqrt(2.0);
            const double im = cl.gain_jitter * normal(rng) / std::sqrt(2.0);
            p.gain *= Complex{1.0 + re, im};
          }
        } else {
          paths = draw_paths(rng, user_aoa, cl.path_spread, cl.power, cl.path_decay, cl.paths);
        }
        const std::size_t offset = spec.nonstationary ? subs[d].start : 0;
        const std::size_t count = spec.nonstationary ? subs[d].size : geometry.size();
        const auto part = generate_channel_range(geometry, paths, vis, offset, count);
        std::copy(part.begin(), part.end(), h_r.begin() + static_cast<std::ptrdiff_t>(offset));
      }
      out.users.push_back(composite_channel(out.transmitter, Channel(std::move(h_r))));
      out.labels.push_back(c);
    }
  }
  return out;
}

}  // namespace ris
