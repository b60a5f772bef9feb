#include "ris/codebook.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "ris/error.hpp"
#include "ris/simd/kernels.hpp"

namespace ris {

InteractionVector::InteractionVector(unsigned bits, std::vector<PhaseIndex> indices)
    : bits_(bits), indices_(std::move(indices)) {
  const auto& g = PhaseGrid::of(bits_);
  if (indices_.empty()) throw ConfigError("interaction vector needs at least one element");
  for (std::size_t m = 0; m < indices_.size(); ++m) {
    if (!g.valid(indices_[m])) {
      throw IndexError("phase index " + std::to_string(indices_[m]) + " at element " +
                       std::to_string(m) + " is off the " + std::to_string(bits_) + "-bit grid");
    }
  }
}

InteractionVector InteractionVector::zeros(unsigned bits, std::size_t elements) {
  return InteractionVector(bits,
                           std::vector<PhaseIndex>(elements, PhaseGrid::of(bits).zero()));
}

Codebook::Codebook(unsigned bits, std::size_t elements, std::vector<InteractionVector> beams)
    : bits_(bits), elements_(elements), beams_(std::move(beams)) {
  if (beams_.empty()) throw ConfigError("codebook needs at least one beam");
  for (std::size_t n = 0; n < beams_.size(); ++n) {
    if (beams_[n].size() != elements_ || beams_[n].bits() != bits_) {
      throw DimensionError("beam " + std::to_string(n) + " does not match codebook M/q");
    }
  }
}

// ---------------------------------------------------------------------------

Complex rotated_sum(const CompositeChannel& c, std::span<const PhaseIndex> phases,
                    const PhaseGrid& grid, std::size_t offset) {
  if (offset + phases.size() > c.size()) {
    throw DimensionError("rotated sum: " + std::to_string(phases.size()) +
                         " phases at offset " + std::to_string(offset) + " exceed channel length " +
                         std::to_string(c.size()));
  }
  return simd::rotated_sum(c.real().data() + offset, c.imag().data() + offset, phases.data(),
                           grid.cos_table().data(), grid.sin_table().data(), phases.size());
}

double gain(const CompositeChannel& c, const InteractionVector& psi) {
  if (c.size() != psi.size()) {
    throw DimensionError("gain: channel length " + std::to_string(c.size()) +
                         " != beam length " + std::to_string(psi.size()));
  }
  return std::norm(rotated_sum(c, psi.indices(), psi.grid())) / static_cast<double>(c.size());
}

double gain(const CompositeChannel& c, std::span<const double> phases) {
  if (c.size() != phases.size()) throw DimensionError("gain: length mismatch");
  Complex acc{0.0, 0.0};
  for (std::size_t m = 0; m < phases.size(); ++m) acc += c[m] * std::polar(1.0, phases[m]);
  return std::norm(acc) / static_cast<double>(c.size());
}

double mean_gain(std::span<const CompositeChannel> users, const InteractionVector& psi) {
  if (users.empty()) throw DomainError("mean gain over an empty user set");
  double total = 0.0;
  for (const auto& u : users) total += gain(u, psi);
  return total / static_cast<double>(users.size());
}

std::size_t best_beam(const Codebook& codebook, const CompositeChannel& user) {
  std::size_t best = 0;
  double best_gain = -1.0;
  for (std::size_t n = 0; n < codebook.size(); ++n) {
    const double g = gain(user, codebook[n]);
    if (g > best_gain) {
      best_gain = g;
      best = n;
    }
  }
  return best;
}

double codebook_objective(const Codebook& codebook, std::span<const CompositeChannel> users) {
  if (users.empty()) throw DomainError("codebook objective over an empty user set");
  double total = 0.0;
  for (const auto& u : users) {
    double best = 0.0;
    for (const auto& beam : codebook.beams()) best = std::max(best, gain(u, beam));
    total += best;
  }
  return total / static_cast<double>(users.size());
}

// ---------------------------------------------------------------------------

Codebook dft_codebook(std::size_t elements, std::size_t beams, const PhaseGrid& grid) {
  if (beams == 0) throw ConfigError("DFT codebook needs at least one beam");
  if (elements == 0) throw ConfigError("DFT codebook needs at least one element");
  const auto k = static_cast<std::int64_t>(grid.size());
  const auto n_beams = static_cast<std::int64_t>(beams);
  std::vector<InteractionVector> out;
  out.reserve(beams);
  for (std::size_t n = 0; n < beams; ++n) {
    std::vector<PhaseIndex> idx(elements);
    for (std::size_t m = 0; m < elements; ++m) {
      // Ideal phase in grid steps: -a K / N with a = m n mod N.
      const auto a = static_cast<std::int64_t>((m * n) % beams);
      const std::int64_t num = a * k;
      const std::int64_t whole = num / n_beams;
      const std::int64_t rem = num % n_beams;
      // x = -(whole + rem/N); candidates -whole and -(whole + 1).
      const PhaseIndex near_zero = grid.index_of_step(-whole);
      const PhaseIndex far = grid.index_of_step(-whole - 1);
      if (2 * rem < n_beams) {
        idx[m] = near_zero;
      } else if (2 * rem > n_beams) {
        idx[m] = far;
      } else {
        idx[m] = std::min(near_zero, far);
      }
    }
    out.emplace_back(grid.bits(), std::move(idx));
  }
  return Codebook(grid.bits(), elements, std::move(out));
}

std::vector<std::vector<double>> dft_phases(std::size_t elements, std::size_t beams) {
  if (beams == 0) throw ConfigError("DFT codebook needs at least one beam");
  std::vector<std::vector<double>> out(beams, std::vector<double>(elements));
  for (std::size_t n = 0; n < beams; ++n) {
    for (std::size_t m = 0; m < elements; ++m) {
      const auto a = static_cast<double>((m * n) % beams);
      out[n][m] = wrap_angle(-kTwoPi * a / static_cast<double>(beams));
    }
  }
  return out;
}

double dft_ideal_objective(std::size_t beams, std::span<const CompositeChannel> users) {
  if (users.empty()) throw DomainError("objective over an empty user set");
  const auto phases = dft_phases(users.front().size(), beams);
  double total = 0.0;
  for (const auto& u : users) {
    double best = 0.0;
    for (const auto& p : phases) best = std::max(best, gain(u, p));
    total += best;
  }
  return total / static_cast<double>(users.size());
}

double egc_upper_bound(const CompositeChannel& c) {
  if (c.size() == 0) return 0.0;
  const double s = simd::abs_sum(c.real().data(), c.imag().data(), c.size());
  return s * s / static_cast<double>(c.size());
}

InteractionVector aligned_oracle(const CompositeChannel& c, const PhaseGrid& grid) {
  const std::size_t m_count = c.size();
  if (m_count == 0) throw DimensionError("aligned oracle on an empty channel");
  const auto phi = c.phase();
  std::vector<PhaseIndex> best;
  std::vector<PhaseIndex> cand(m_count);
  double best_gain = -1.0;
  // Offsets are tried from phase zero upward, so a tie keeps the smallest
  // non-negative common offset.
  for (std::uint32_t k = 0; k < grid.size(); ++k) {
    const double target = grid.value(grid.shift(grid.zero(), k));
    for (std::size_t m = 0; m < m_count; ++m) cand[m] = grid.nearest(target - phi[m]);
    const double g = std::norm(rotated_sum(c, cand, grid));
    if (g > best_gain) {
      best_gain = g;
      best = cand;
    }
  }
  return InteractionVector(grid.bits(), std::move(best));
}

SearchResult exhaustive_search(std::span<const CompositeChannel> users, std::size_t elements,
                               const PhaseGrid& grid, std::uint64_t limit) {
  if (users.empty()) throw DomainError("exhaustive search over an empty user set");
  if (elements == 0) throw DimensionError("exhaustive search with zero elements");
  for (const auto& u : users) {
    if (u.size() != elements) throw DimensionError("exhaustive search: user length != M");
  }
  const double count = std::pow(static_cast<double>(grid.size()), static_cast<double>(elements));
  if (count > static_cast<double>(limit)) {
    throw SearchLimitError("exhaustive search over " + std::to_string(grid.size()) + "^" +
                               std::to_string(elements) + " vectors exceeds the limit of " +
                               std::to_string(limit),
                           count, static_cast<double>(limit));
  }
  const std::size_t n_users = users.size();
  const std::uint32_t k = grid.size();
  const auto cos_t = grid.cos_table();
  const auto sin_t = grid.sin_table();

  // partial[d * U + u] = sum over the first d elements for user u.
  std::vector<Complex> partial((elements + 1) * n_users, Complex{0.0, 0.0});
  std::vector<PhaseIndex> current(elements, 0);
  std::vector<PhaseIndex> best(elements, 0);
  double best_score = -1.0;

  auto extend = [&](std::size_t depth) {
    const PhaseIndex p = current[depth];
    const Complex rot{cos_t[p], sin_t[p]};
    for (std::size_t u = 0; u < n_users; ++u) {
      partial[(depth + 1) * n_users + u] = partial[depth * n_users + u] + users[u][depth] * rot;
    }
  };

  // Odometer enumeration, element 0 most significant, lexicographic order.
  for (std::size_t d = 0; d < elements; ++d) extend(d);
  while (true) {
    double score = 0.0;
    for (std::size_t u = 0; u < n_users; ++u) score += std::norm(partial[elements * n_users + u]);
    if (score > best_score) {
      best_score = score;
      best = current;
    }
    std::size_t d = elements;
    while (d > 0 && current[d - 1] + 1 == k) {
      current[d - 1] = 0;
      --d;
    }
    if (d == 0) break;
    ++current[d - 1];
    for (std::size_t e = d - 1; e < elements; ++e) extend(e);
  }
  InteractionVector vec(grid.bits(), std::move(best));
  const double g = mean_gain(users, vec);
  return {std::move(vec), g};
}

// ---------------------------------------------------------------------------

using nlohmann::json;

std::string serialize_codebook(const Codebook& codebook) {
  json beams = json::array();
  for (const auto& b : codebook.beams()) {
    json row = json::array();
    for (PhaseIndex i : b.indices()) row.push_back(i + 1);
    beams.push_back(std::move(row));
  }
  json doc;
  doc["format_version"] = kCodebookFormatVersion;
  doc["M"] = codebook.elements();
  doc["N"] = codebook.size();
  doc["q"] = codebook.bits();
  doc["beams"] = std::move(beams);
  return doc.dump();
}

Codebook parse_codebook(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("codebook parse error: ") + e.what(), e.byte);
  }
  try {
    if (doc.at("format_version").get<int>() != kCodebookFormatVersion) {
      throw ParseError("unsupported codebook format_version", 0);
    }
    const auto m = doc.at("M").get<std::size_t>();
    const auto n = doc.at("N").get<std::size_t>();
    const auto q = doc.at("q").get<unsigned>();
    const auto& grid = PhaseGrid::of(q);
    const json& rows = doc.at("beams");
    if (rows.size() != n) throw DimensionError("codebook N does not match beam count");
    std::vector<InteractionVector> beams;
    for (std::size_t b = 0; b < rows.size(); ++b) {
      if (rows[b].size() != m) {
        throw DimensionError("beam " + std::to_string(b) + " has " +
                             std::to_string(rows[b].size()) + " entries, expected " +
                             std::to_string(m));
      }
      std::vector<PhaseIndex> idx(m);
      for (std::size_t e = 0; e < m; ++e) {
        const auto k = rows[b][e].get<std::int64_t>();
        if (k < 1 || k > static_cast<std::int64_t>(grid.size())) {
          throw IndexError("beam " + std::to_string(b) + " element " + std::to_string(e) +
                           ": index " + std::to_string(k) + " outside [1, " +
                           std::to_string(grid.size()) + "]");
        }
        idx[e] = static_cast<PhaseIndex>(k - 1);
      }
      beams.emplace_back(q, std::move(idx));
    }
    return Codebook(q, m, std::move(beams));
  } catch (const json::exception& e) {
    throw ParseError(std::string("codebook file: ") + e.what(), 0);
  }
}

void write_codebook(const std::filesystem::path& path, const Codebook& codebook) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << serialize_codebook(codebook) << '\n';
}

Codebook read_codebook(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_codebook(ss.str());
}

}  // namespace ris
