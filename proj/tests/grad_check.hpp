#pragma once

// Central finite-difference checks for network gradients.

#include <algorithm>
#include <cmath>
#include <vector>

#include "ris/mlp.hpp"
#include "ris/rng.hpp"

namespace gradcheck {

// Relative error with a small absolute floor so that gradients that are
// zero up to rounding do not divide by zero.
inline double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

// Loss L = sum_i w_i y_i for fixed random weights w.
inline double loss(const ris::Mlp& net, const std::vector<double>& x, const std::vector<double>& w) {
  const auto y = net.forward(x);
  double l = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) l += w[i] * y[i];
  return l;
}

struct Result {
  double params = 0.0;
  double inputs = 0.0;
};

// Max relative error of backward() against central differences, over all
// parameters and inputs.
inline Result check(ris::Mlp net, const std::vector<double>& x, const std::vector<double>& w,
                    double h = 1e-5) {
  ris::Mlp::Cache cache;
  net.forward(x, cache);
  std::vector<double> gp(net.parameter_count(), 0.0);
  std::vector<double> gx(x.size(), 0.0);
  net.backward(cache, w, gp, gx);

  Result r;
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double keep = params[i];
    params[i] = keep + h;
    const double up = loss(net, x, w);
    params[i] = keep - h;
    const double down = loss(net, x, w);
    params[i] = keep;
    r.params = std::max(r.params, relative_error(gp[i], (up - down) / (2 * h)));
  }
  auto xi = x;
  for (std::size_t i = 0; i < x.size(); ++i) {
    xi[i] = x[i] + h;
    const double up = loss(net, xi, w);
    xi[i] = x[i] - h;
    const double down = loss(net, xi, w);
    xi[i] = x[i];
    r.inputs = std::max(r.inputs, relative_error(gx[i], (up - down) / (2 * h)));
  }
  return r;
}

}  // namespace gradcheck
