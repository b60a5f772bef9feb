#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "ris/error.hpp"
#include "ris/scenario.hpp"

using namespace ris;
using oracle::C;

namespace {

void check_close(std::span<const Complex> got, const std::vector<C>& want, double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    CHECK(std::abs(got[i] - want[i]) < tol);
  }
}

// Hand-written planar-wave sum over visible paths.
std::vector<C> manual_channel(const SurfaceGeometry& g, const std::vector<PathComponent>& paths,
                              const std::vector<std::vector<bool>>& visible) {
  std::vector<C> h(g.size(), 0.0);
  for (std::size_t m = 0; m < g.size(); ++m) {
    const auto& p = g.elements()[m];
    for (std::size_t l = 0; l < paths.size(); ++l) {
      if (!visible[m][l]) continue;
      const double proj = p.x * std::cos(paths[l].aoa) + p.y * std::sin(paths[l].aoa);
      h[m] += paths[l].gain * std::polar(1.0, 2.0 * oracle::pi * proj);
    }
  }
  return h;
}

ScenarioSpec two_cluster_spec(std::uint64_t seed) {
  ScenarioSpec spec;
  spec.geometry = SurfaceGeometry::ula(16);
  spec.transmitter.aoa_center = 0.3;
  ClusterSpec a;
  a.aoa_center = -0.9;
  a.users = 6;
  ClusterSpec b = a;
  b.aoa_center = 0.8;
  spec.clusters = {a, b};
  spec.seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("wrap_angle reduces to (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
  CHECK(wrap_angle(0.25) == 0.25);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(rng);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::remainder(a - w, 2 * kPi)) < 1e-9);
  }
}

TEST_CASE("geometry validation") {
  CHECK_THROWS_AS(SurfaceGeometry::ula(0), ConfigError);
  CHECK_THROWS_AS(SurfaceGeometry({{0, 0, 0}, {0, 1, 0}}, {{0, 1}}), ConfigError);
  CHECK_THROWS_AS(SurfaceGeometry({{0, 0, 0}, {0, 1, 0}}, {{0, 1}, {0, 1}}), ConfigError);
  const auto d = SurfaceGeometry::distributed_ula(3, 4, 2.0);
  CHECK(d.size() == 12);
  REQUIRE(d.subsurfaces().size() == 3);
  CHECK(d.subsurfaces()[2].start == 8);
  CHECK(d.subsurfaces()[2].size == 4);
}

TEST_CASE("array_response examples") {
  const auto ula4 = SurfaceGeometry::ula(4);
  check_close(array_response(ula4, 0.0).coefficients(), {1, 1, 1, 1});
  check_close(array_response(ula4, kPi / 6).coefficients(), {1, C(0, 1), -1, C(0, -1)});
  const auto dist = SurfaceGeometry::distributed_ula(2, 3, 5.3);
  check_close(array_response(dist, 0.0).coefficients(), std::vector<C>(6, 1.0));
}

TEST_CASE("array_response on a half-wavelength ULA is exp(j pi (m-1) sin aoa)") {
  const auto g = SurfaceGeometry::ula(9);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int t = 0; t < 50; ++t) {
    const double aoa = u(rng);
    std::vector<C> want;
    for (int m = 0; m < 9; ++m) want.push_back(std::polar(1.0, oracle::pi * m * std::sin(aoa)));
    check_close(array_response(g, aoa).coefficients(), want, 1e-11);
  }
}

TEST_CASE("array_response entries have unit magnitude for arbitrary geometry") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> pos(-40.0, 40.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int t = 0; t < 20; ++t) {
    std::vector<Position> p;
    for (int m = 0; m < 25; ++m) p.push_back({pos(rng), pos(rng), pos(rng)});
    const SurfaceGeometry g(p, {});
    const auto h = array_response(g, ang(rng));
    for (const auto& x : h.coefficients()) CHECK(std::abs(std::abs(x) - 1.0) < 1e-12);
  }
}

TEST_CASE("generate_channel examples") {
  const auto g2 = SurfaceGeometry::ula(2);
  const std::vector<PathComponent> one{{1.0, 0.0}};
  check_close(generate_channel(g2, one).coefficients(), {1, 1});

  const VisibilityRegion vis({{-kPi, kPi}, {kPi / 4, kPi / 2}});
  const auto masked = generate_channel(g2, one, &vis);
  CHECK(masked[0] == Complex(1.0, 0.0));
  CHECK(masked[1] == Complex(0.0, 0.0));

  const std::vector<PathComponent> two{{1.0, 0.0}, {1.0, kPi / 6}};
  check_close(generate_channel(g2, two).coefficients(), {2, C(1, 1)});

  CHECK(generate_channel(g2, {}).coefficients()[0] == Complex(0.0, 0.0));
  const VisibilityRegion short_vis({{-kPi, kPi}});
  CHECK_THROWS_AS(generate_channel(g2, one, &short_vis), DimensionError);
}

TEST_CASE("full visibility equals no visibility exactly") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto g = SurfaceGeometry::ula(12);
  const auto full = VisibilityRegion::full(12);
  for (int t = 0; t < 50; ++t) {
    std::vector<PathComponent> paths;
    for (int l = 0; l < 4; ++l) paths.push_back({{n(rng), n(rng)}, ang(rng)});
    CHECK(generate_channel(g, paths, &full) == generate_channel(g, paths));
  }
}

TEST_CASE("masked paths are exactly absent") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::normal_distribution<double> n(0.0, 1.0);
  const auto g = SurfaceGeometry::ula(10);
  for (int t = 0; t < 50; ++t) {
    std::vector<PathComponent> paths;
    for (int l = 0; l < 5; ++l) paths.push_back({{n(rng), n(rng)}, ang(rng)});
    std::vector<AngleInterval> iv;
    std::vector<std::vector<bool>> seen(10);
    for (std::size_t m = 0; m < 10; ++m) {
      double a = ang(rng), b = ang(rng);
      if (a > b) std::swap(a, b);
      iv.push_back({a, b});
      for (const auto& p : paths) seen[m].push_back(p.aoa >= a && p.aoa <= b);
    }
    const VisibilityRegion vis(iv);
    check_close(generate_channel(g, paths, &vis).coefficients(), manual_channel(g, paths, seen),
                1e-12);
  }
}

TEST_CASE("shrinking visibility never increases magnitude for aligned real gains") {
  // With non-negative real gains and broadside-aligned paths every term at
  // element 0 is a non-negative real number, so removing terms cannot grow it.
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> mag(0.0, 2.0);
  const SurfaceGeometry g({{0, 0, 0}}, {});
  for (int t = 0; t < 100; ++t) {
    std::vector<PathComponent> paths;
    for (int l = 0; l < 6; ++l) paths.push_back({mag(rng), ang(rng)});
    double lo = -kPi, hi = kPi;
    double prev = std::abs(generate_channel(g, paths)[0]);
    for (int s = 0; s < 5; ++s) {
      lo *= 0.7;
      hi *= 0.7;
      const VisibilityRegion vis({{lo, hi}});
      const double cur = std::abs(generate_channel(g, paths, &vis)[0]);
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("composite_channel examples and commutativity") {
  const Channel ones(std::vector<Complex>(3, 1.0));
  const Channel v({{1, 2}, {3, -1}, {0, 0.5}});
  CHECK(composite_channel(ones, v).coefficients()[1] == Complex(3, -1));
  const auto z = composite_channel(Channel({2.0, 0.0}), Channel({1.0, 5.0}));
  CHECK(z[0] == Complex(2.0, 0.0));
  CHECK(z[1] == Complex(0.0, 0.0));
  const auto p = composite_channel(Channel({std::polar(1.0, kPi / 4)}),
                                   Channel({std::polar(1.0, kPi / 4)}));
  CHECK(std::abs(p[0] - C(0, 1)) < 1e-15);
  CHECK(p.magnitude()[0] == doctest::Approx(1.0));
  CHECK(p.phase()[0] == doctest::Approx(kPi / 2));
  CHECK_THROWS_AS(composite_channel(Channel({1.0}), Channel({1.0, 2.0})), DimensionError);

  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const Channel a(oracle::random_channel(8, rng));
    const Channel b(oracle::random_channel(8, rng));
    CHECK(composite_channel(a, b) == composite_channel(b, a));
  }
}

TEST_CASE("composite polar view is consistent") {
  std::mt19937_64 rng(37);
  for (int t = 0; t < 20; ++t) {
    const CompositeChannel c(oracle::random_channel(16, rng));
    for (std::size_t m = 0; m < 16; ++m) {
      CHECK(c.magnitude()[m] >= 0.0);
      CHECK(c.phase()[m] > -kPi);
      CHECK(c.phase()[m] <= kPi);
      CHECK(std::abs(std::polar(c.magnitude()[m], c.phase()[m]) - c[m]) < 1e-12);
    }
  }
  CHECK_THROWS_AS(Channel({Complex(std::nan(""), 0.0)}), ValidationError);
}

TEST_CASE("generate_scenario is deterministic per seed") {
  ScenarioSpec spec;
  spec.geometry = SurfaceGeometry::ula(8);
  ClusterSpec c;
  c.users = 1;
  c.paths = 1;
  spec.clusters = {c};
  spec.seed = 42;
  const auto a = generate_scenario(spec);
  const auto b = generate_scenario(spec);
  CHECK(a.users == b.users);
  CHECK(a.transmitter == b.transmitter);
  spec.seed = 43;
  CHECK_FALSE(generate_scenario(spec).users == a.users);
  CHECK(generate_scenario(two_cluster_spec(9)).users == generate_scenario(two_cluster_spec(9)).users);
}

TEST_CASE("users correlate more within a cluster than across clusters") {
  auto corr = [](const CompositeChannel& x, const CompositeChannel& y) {
    C s = 0.0;
    double nx = 0.0, ny = 0.0;
    for (std::size_t m = 0; m < x.size(); ++m) {
      s += x[m] * std::conj(y[m]);
      nx += std::norm(x[m]);
      ny += std::norm(y[m]);
    }
    return std::abs(s) / std::sqrt(nx * ny);
  };
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto data = generate_scenario(two_cluster_spec(seed));
    double within = 0.0, across = 0.0;
    int nw = 0, na = 0;
    for (std::size_t i = 0; i < data.users.size(); ++i) {
      for (std::size_t j = i + 1; j < data.users.size(); ++j) {
        const double r = corr(data.users[i], data.users[j]);
        if (data.labels[i] == data.labels[j]) {
          within += r;
          ++nw;
        } else {
          across += r;
          ++na;
        }
      }
    }
    CHECK(within / nw > across / na);
  }
}

TEST_CASE("visibility excluding every path zeroes that element for all users") {
  auto spec = two_cluster_spec(5);
  spec.visibility.mode = VisibilitySpec::Mode::kPerElement;
  spec.visibility.intervals.assign(16, AngleInterval{-kPi, kPi});
  spec.visibility.intervals[4] = {3.0, 3.0001};  // no path arrives there
  const auto data = generate_scenario(spec);
  for (const auto& u : data.users) CHECK(u[4] == Complex(0.0, 0.0));
  CHECK(std::abs(data.users[0][3]) > 0.0);
}

TEST_CASE("nonstationary scenarios draw paths per sub-surface") {
  ScenarioSpec spec;
  spec.geometry = SurfaceGeometry::distributed_ula(2, 4, 3.0);
  ClusterSpec c;
  c.users = 2;
  c.paths = 1;
  spec.clusters = {c};
  spec.nonstationary = true;
  spec.seed = 8;
  const auto data = generate_scenario(spec);
  // One path per sub-surface: magnitudes are constant within each sub-surface
  // but differ between them.
  const auto& u = data.users[0];
  for (std::size_t m = 1; m < 4; ++m) CHECK(u.magnitude()[m] == doctest::Approx(u.magnitude()[0]));
  for (std::size_t m = 5; m < 8; ++m) CHECK(u.magnitude()[m] == doctest::Approx(u.magnitude()[4]));
  CHECK(u.magnitude()[0] != doctest::Approx(u.magnitude()[4]));
}

TEST_CASE("generate_scenario rejects empty specs") {
  ScenarioSpec spec;
  CHECK_THROWS_AS(generate_scenario(spec), ConfigError);
  ClusterSpec c;
  c.users = 0;
  spec.clusters = {c};
  CHECK_THROWS_AS(generate_scenario(spec), ConfigError);
}
