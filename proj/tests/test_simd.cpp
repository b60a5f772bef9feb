#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "ris/phase_grid.hpp"
#include "ris/simd/kernels.hpp"

using namespace ris;

namespace {

struct Inputs {
  std::vector<double> a, b, re, im;
  std::vector<std::uint32_t> idx;
};

Inputs make_inputs(std::size_t n, unsigned bits, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> ud(0, (1u << bits) - 1);
  Inputs in;
  for (std::size_t i = 0; i < n; ++i) {
    in.a.push_back(nd(rng));
    in.b.push_back(nd(rng));
    in.re.push_back(nd(rng));
    in.im.push_back(nd(rng));
    in.idx.push_back(ud(rng));
  }
  return in;
}

double scale_of(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i]) * std::abs(y[i]);
  return s;
}

}  // namespace

TEST_CASE("level names parse and round-trip") {
  CHECK(simd::parse_level("scalar") == simd::Level::kScalar);
  CHECK(simd::parse_level("avx2") == simd::Level::kAvx2);
  CHECK(simd::level_name(simd::Level::kScalar) == "scalar");
  CHECK_THROWS(simd::parse_level("sse9"));
}

TEST_CASE("set_level selects the requested or a supported level") {
  const auto before = simd::active_level();
  CHECK(simd::set_level(simd::Level::kScalar) == simd::Level::kScalar);
  CHECK(simd::active_level() == simd::Level::kScalar);
  const auto got = simd::set_level(simd::Level::kAvx2);
  CHECK(got == simd::detected_level());
  simd::set_level(before);
}

TEST_CASE("scalar and vector kernels agree on every length") {
  const auto& ref = simd::kernels_for(simd::Level::kScalar);
  const auto& vec = simd::kernels_for(simd::detected_level());
  if (simd::detected_level() == simd::Level::kScalar) {
    MESSAGE("no vector kernels on this machine; comparing scalar with itself");
  }
  for (unsigned bits : {1u, 3u, 6u}) {
    const auto& grid = PhaseGrid::of(bits);
    for (std::size_t n = 0; n <= 67; ++n) {
      const auto in = make_inputs(n, bits, 1000 * bits + n);
      const auto r1 = ref.rotated_sum(in.re.data(), in.im.data(), in.idx.data(),
                                      grid.cos_table().data(), grid.sin_table().data(), n);
      const auto r2 = vec.rotated_sum(in.re.data(), in.im.data(), in.idx.data(),
                                      grid.cos_table().data(), grid.sin_table().data(), n);
      const double tol = 1e-12 * scale_of(in.re, in.re);
      CHECK(std::abs(r1.real() - r2.real()) <= tol);
      CHECK(std::abs(r1.imag() - r2.imag()) <= tol);

      CHECK(std::abs(ref.dot(in.a.data(), in.b.data(), n) - vec.dot(in.a.data(), in.b.data(), n)) <=
            1e-12 * scale_of(in.a, in.b));
      CHECK(std::abs(ref.abs_sum(in.re.data(), in.im.data(), n) -
                     vec.abs_sum(in.re.data(), in.im.data(), n)) <= 1e-12 * scale_of(in.re, in.im));

      auto y1 = in.b;
      auto y2 = in.b;
      ref.axpy(0.37, in.a.data(), y1.data(), n);
      vec.axpy(0.37, in.a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) <= 1e-14 * (1 + std::abs(y1[i])));
    }
  }
}

TEST_CASE("scalar kernels match their definitions") {
  const auto& grid = PhaseGrid::of(2);
  // values of the 2-bit grid: -pi/2, 0, pi/2, pi (0-based indices 0..3)
  const std::vector<double> re{1.0, 0.0, 2.0};
  const std::vector<double> im{0.0, 1.0, 0.0};
  const std::vector<std::uint32_t> idx{1, 0, 3};
  // 1*e^{0} + j*e^{-j pi/2} + 2*e^{j pi} = 1 + 1 - 2 = 0
  const auto s = simd::scalar::rotated_sum(re.data(), im.data(), idx.data(), grid.cos_table().data(),
                                           grid.sin_table().data(), 3);
  CHECK(s.real() == doctest::Approx(0.0));
  CHECK(s.imag() == doctest::Approx(0.0));
  const std::vector<double> a{3.0, 4.0};
  CHECK(simd::scalar::abs_sum(a.data(), std::vector<double>{4.0, 3.0}.data(), 2) ==
        doctest::Approx(10.0));
  CHECK(simd::scalar::dot(a.data(), a.data(), 2) == 25.0);
}
