#include "ris/multilevel.hpp"

#include <cmath>
#include <sstream>

#include "ris/error.hpp"

namespace ris {

LevelSpec::LevelSpec(std::vector<std::size_t> sizes) : sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw ConfigError("level spec needs at least one level");
  strides_.resize(sizes_.size());
  std::size_t stride = 1;
  for (std::size_t l = 0; l < sizes_.size(); ++l) {
    if (sizes_[l] == 0) throw ConfigError("level sizes must be >= 1");
    strides_[l] = stride;
    stride *= sizes_[l];
  }
  elements_ = stride;
}

LevelSpec LevelSpec::parse(const std::string& text) {
  std::vector<std::size_t> sizes;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long long v = 0;
    try {
      v = std::stoll(item, &used);
    } catch (const std::exception&) {
      throw ConfigError("level spec '" + text + "': '" + item + "' is not an integer");
    }
    if (v < 1 || item.find_first_not_of(" \t", used) != std::string::npos) {
      throw ConfigError("level spec '" + text + "': bad entry '" + item + "'");
    }
    sizes.push_back(static_cast<std::size_t>(v));
  }
  return LevelSpec(std::move(sizes));
}

void LevelSpec::require_elements(std::size_t m) const {
  if (elements_ != m) {
    throw ConfigError("level spec " + to_string() + " has product " + std::to_string(elements_) +
                      " but the surface has M = " + std::to_string(m));
  }
}

std::string LevelSpec::to_string() const {
  std::string s;
  for (std::size_t l = 0; l < sizes_.size(); ++l) {
    if (l) s += ',';
    s += std::to_string(sizes_[l]);
  }
  return s;
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> index_to_multilevel(std::size_t m, const LevelSpec& spec) {
  if (m < 1 || m > spec.elements()) {
    throw IndexError("element index " + std::to_string(m) + " outside [1, " +
                     std::to_string(spec.elements()) + "]");
  }
  std::vector<std::size_t> out(spec.levels());
  for (std::size_t l = 0; l < spec.levels(); ++l) {
    const std::size_t below = spec.stride(l);
    const std::size_t ceil_div = (m + below - 1) / below;
    const std::size_t p = ceil_div % spec.size(l);
    out[l] = p == 0 ? spec.size(l) : p;
  }
  return out;
}

std::size_t multilevel_to_index(std::span<const std::size_t> digits, const LevelSpec& spec) {
  if (digits.size() != spec.levels()) {
    throw DimensionError("multi-level index has " + std::to_string(digits.size()) +
                         " components, spec has " + std::to_string(spec.levels()) + " levels");
  }
  std::size_t m = 1;
  for (std::size_t l = 0; l < digits.size(); ++l) {
    if (digits[l] < 1 || digits[l] > spec.size(l)) {
      throw IndexError("level " + std::to_string(l + 1) + " index " + std::to_string(digits[l]) +
                       " outside [1, " + std::to_string(spec.size(l)) + "]");
    }
    m += (digits[l] - 1) * spec.stride(l);
  }
  return m;
}

// ---------------------------------------------------------------------------

LevelPhases LevelPhases::zeros(const LevelSpec& spec, const PhaseGrid& grid) {
  LevelPhases out;
  out.levels.resize(spec.levels());
  for (std::size_t l = 0; l < spec.levels(); ++l) {
    out.levels[l].assign(spec.entries(l), grid.zero());
  }
  return out;
}

void LevelPhases::validate(const LevelSpec& spec, const PhaseGrid& grid) const {
  if (levels.size() != spec.levels()) {
    throw DimensionError("level phases have " + std::to_string(levels.size()) +
                         " levels, spec has " + std::to_string(spec.levels()));
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (levels[l].size() != spec.entries(l)) {
      throw DimensionError("level " + std::to_string(l + 1) + " has " +
                           std::to_string(levels[l].size()) + " phases, expected " +
                           std::to_string(spec.entries(l)));
    }
    for (PhaseIndex p : levels[l]) {
      if (!grid.valid(p)) throw IndexError("level phase off the grid");
    }
  }
}

namespace {

// Sum of components of levels [from, to) for entry `entry` of level `from`.
std::int64_t step_sum(const LevelPhases& phases, const LevelSpec& spec, const PhaseGrid& grid,
                      std::size_t from, std::size_t to, std::size_t entry) {
  std::int64_t total = 0;
  const std::size_t base = spec.stride(from);
  for (std::size_t l = from; l < to; ++l) {
    const std::size_t idx = entry * base / spec.stride(l);
    total += grid.step_of(phases.levels[l][idx]);
  }
  return total;
}

}  // namespace

InteractionVector synthesize_phases(const LevelPhases& phases, const LevelSpec& spec,
                                    const PhaseGrid& grid) {
  phases.validate(spec, grid);
  return InteractionVector(grid.bits(), upper_phases(phases, spec, grid, 0));
}

std::vector<PhaseIndex> upper_phases(const LevelPhases& phases, const LevelSpec& spec,
                                     const PhaseGrid& grid, std::size_t from) {
  std::vector<PhaseIndex> out(spec.entries(from));
  for (std::size_t e = 0; e < out.size(); ++e) {
    out[e] = grid.index_of_step(step_sum(phases, spec, grid, from, spec.levels(), e));
  }
  return out;
}

CompositeChannel effective_channel(const CompositeChannel& c, const LevelSpec& spec,
                                   const LevelPhases& lower, const PhaseGrid& grid,
                                   std::size_t level) {
  if (c.size() != spec.elements()) {
    throw DimensionError("effective channel: channel length " + std::to_string(c.size()) +
                         " != spec product " + std::to_string(spec.elements()));
  }
  if (level >= spec.levels()) throw IndexError("effective channel: level out of range");
  if (lower.levels.size() < level) throw DimensionError("effective channel: missing lower levels");
  for (std::size_t l = 0; l < level; ++l) {
    if (lower.levels[l].size() != spec.entries(l)) {
      throw DimensionError("effective channel: level " + std::to_string(l + 1) + " shape");
    }
  }
  if (level == 0) return c;
  const std::size_t block = spec.stride(level);
  std::vector<PhaseIndex> element_phase(c.size());
  for (std::size_t m = 0; m < c.size(); ++m) {
    element_phase[m] = grid.index_of_step(step_sum(lower, spec, grid, 0, level, m));
  }
  std::vector<Complex> out(spec.entries(level));
  for (std::size_t g = 0; g < out.size(); ++g) {
    out[g] = rotated_sum(c, std::span<const PhaseIndex>(element_phase).subspan(g * block, block),
                         grid, g * block);
  }
  return CompositeChannel(std::move(out));
}

double decomposition_identity_check(const CompositeChannel& c, const LevelSpec& spec,
                                    const LevelPhases& phases, const PhaseGrid& grid) {
  phases.validate(spec, grid);
  if (c.size() != spec.elements()) throw DimensionError("identity check: channel length");
  // Direct: sum_m c_m exp(j theta~_m).
  Complex direct{0.0, 0.0};
  const auto synth = synthesize_phases(phases, spec, grid);
  for (std::size_t m = 0; m < c.size(); ++m) {
    direct += c[m] * std::polar(1.0, grid.value(synth[m]));
  }
  // Nested: innermost sums first, each level rotating its block's sum.
  std::vector<Complex> current(c.coefficients().begin(), c.coefficients().end());
  for (std::size_t l = 0; l < spec.levels(); ++l) {
    const std::size_t group = l == 0 ? 1 : spec.size(l - 1);
    std::vector<Complex> next(spec.entries(l));
    for (std::size_t e = 0; e < next.size(); ++e) {
      Complex s{0.0, 0.0};
      for (std::size_t i = 0; i < group; ++i) s += current[e * group + i];
      next[e] = std::polar(1.0, grid.value(phases.levels[l][e])) * s;
    }
    current = std::move(next);
  }
  Complex nested{0.0, 0.0};
  for (const auto& x : current) nested += x;
  return std::abs(direct - nested);
}

}  // namespace ris
