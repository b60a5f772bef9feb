#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "grad_check.hpp"
#include "oracles.hpp"
#include "ris/error.hpp"
#include "ris/mlp.hpp"

using namespace ris;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> d(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace

TEST_CASE("forward pass matches a hand computation") {
  Mlp net({2, 2, 1}, OutputHead::kLinear);
  // layer 0: W = [[1, 2], [3, 4]], b = [0.5, -0.5]; layer 1: W = [1, -1], b = [0.25]
  const std::vector<double> p{1, 2, 3, 4, 0.5, -0.5, 1, -1, 0.25};
  std::copy(p.begin(), p.end(), net.parameters().begin());
  const std::vector<double> x{0.1, -0.2};
  const double h0 = std::tanh(1 * 0.1 + 2 * -0.2 + 0.5);
  const double h1 = std::tanh(3 * 0.1 + 4 * -0.2 - 0.5);
  CHECK(net.forward(x)[0] == doctest::Approx(h0 - h1 + 0.25).epsilon(1e-14));

  Mlp phase({2, 2, 1}, OutputHead::kPhase);
  std::copy(p.begin(), p.end(), phase.parameters().begin());
  CHECK(phase.forward(x)[0] ==
        doctest::Approx(oracle::pi * std::tanh(h0 - h1 + 0.25)).epsilon(1e-14));
}

TEST_CASE("shape validation") {
  CHECK_THROWS_AS(Mlp({3}, OutputHead::kLinear), ConfigError);
  CHECK_THROWS_AS(Mlp({3, 0, 1}, OutputHead::kLinear), ConfigError);
  Mlp net({3, 4, 2}, OutputHead::kLinear);
  CHECK(net.parameter_count() == 3 * 4 + 4 + 4 * 2 + 2);
  CHECK_THROWS_AS(net.forward(std::vector<double>{1.0, 2.0}), DimensionError);
}

TEST_CASE("zero output layer gives an all-zero phase output") {
  Rng rng(3);
  Mlp net({6, 8, 3}, OutputHead::kPhase);
  net.initialize(rng, true);
  std::mt19937_64 r(4);
  for (const double y : net.forward(random_vector(6, r))) CHECK(y == 0.0);
}

TEST_CASE("phase head output stays in (-pi, pi]") {
  std::mt19937_64 r(5);
  for (int t = 0; t < 200; ++t) {
    Mlp net({4, 5, 4}, OutputHead::kPhase);
    const auto p = random_vector(net.parameter_count(), r, 3.0 + t % 10);
    std::copy(p.begin(), p.end(), net.parameters().begin());
    for (double y : net.forward(random_vector(4, r, 5.0))) {
      CHECK(y > -oracle::pi);
      CHECK(y <= oracle::pi);
    }
  }
}

TEST_CASE("backprop matches central differences on [4, 8, 4] nets") {
  std::mt19937_64 r(6);
  for (OutputHead head : {OutputHead::kLinear, OutputHead::kPhase}) {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      Mlp net({4, 8, 4}, head);
      const auto p = random_vector(net.parameter_count(), r, 0.5);
      std::copy(p.begin(), p.end(), net.parameters().begin());
      const auto res = gradcheck::check(net, random_vector(4, r), random_vector(4, r));
      worst = std::max({worst, res.params, res.inputs});
    }
    CHECK(worst < 1e-5);
  }
}

TEST_CASE("backprop matches central differences on deeper nets") {
  std::mt19937_64 r(7);
  for (int t = 0; t < 10; ++t) {
    Mlp net({6, 7, 5, 1}, OutputHead::kLinear);
    const auto p = random_vector(net.parameter_count(), r, 0.4);
    std::copy(p.begin(), p.end(), net.parameters().begin());
    const auto res = gradcheck::check(net, random_vector(6, r), {1.0});
    CHECK(res.params < 1e-5);
    CHECK(res.inputs < 1e-5);
  }
}

TEST_CASE("backward accumulates and can skip parameter gradients") {
  std::mt19937_64 r(8);
  Mlp net({3, 4, 2}, OutputHead::kLinear);
  const auto p = random_vector(net.parameter_count(), r);
  std::copy(p.begin(), p.end(), net.parameters().begin());
  Mlp::Cache cache;
  net.forward(random_vector(3, r), cache);
  const std::vector<double> g{1.0, -2.0};
  std::vector<double> once(net.parameter_count(), 0.0), twice(net.parameter_count(), 0.0);
  net.backward(cache, g, once);
  net.backward(cache, g, twice);
  net.backward(cache, g, twice);
  for (std::size_t i = 0; i < once.size(); ++i) CHECK(twice[i] == doctest::Approx(2 * once[i]));
  std::vector<double> gx(3, 0.0), gx2(3, 0.0);
  net.backward(cache, g, {}, gx);
  net.backward(cache, g, once, gx2);
  for (std::size_t i = 0; i < 3; ++i) CHECK(gx[i] == gx2[i]);
}

TEST_CASE("soft update") {
  Rng rng(9);
  Mlp a({3, 4, 2}, OutputHead::kLinear), b({3, 4, 2}, OutputHead::kLinear);
  a.initialize(rng);
  b.initialize(rng);
  Mlp c = b;
  c.soft_update(a, 1.0);
  CHECK(c == a);
  c = b;
  c.soft_update(a, 0.0);
  CHECK(c == b);
  c.soft_update(a, 0.25);
  for (std::size_t i = 0; i < c.parameter_count(); ++i) {
    CHECK(c.parameters()[i] ==
          doctest::Approx(0.25 * a.parameters()[i] + 0.75 * b.parameters()[i]));
  }
  CHECK_THROWS_AS(c.soft_update(Mlp({3, 5, 2}, OutputHead::kLinear), 0.5), ConfigError);
}

TEST_CASE("Adam with zero learning rate leaves parameters unchanged") {
  std::vector<double> p{1.0, -2.0, 3.0};
  Adam opt(3, 0.0);
  opt.step(p, std::vector<double>{0.5, 0.5, -1.0});
  CHECK(p == std::vector<double>{1.0, -2.0, 3.0});
}

TEST_CASE("Adam minimizes a quadratic") {
  std::vector<double> p{3.0, -4.0};
  Adam opt(2, 0.05);
  for (int t = 0; t < 2000; ++t) opt.step(p, std::vector<double>{2 * p[0], 2 * p[1]});
  CHECK(std::abs(p[0]) < 1e-2);
  CHECK(std::abs(p[1]) < 1e-2);
  // First step moves each coordinate by the learning rate against the gradient sign.
  std::vector<double> q{1.0, 1.0};
  Adam fresh(2, 0.1);
  fresh.step(q, std::vector<double>{5.0, -0.001});
  CHECK(q[0] == doctest::Approx(0.9));
  CHECK(q[1] == doctest::Approx(1.1));
  CHECK_THROWS_AS(fresh.step(q, std::vector<double>{1.0}), DimensionError);
}
