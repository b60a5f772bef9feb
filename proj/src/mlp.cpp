#include "ris/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ris/error.hpp"
#include "ris/scenario.hpp"
#include "ris/simd/kernels.hpp"

namespace ris {

Mlp::Mlp(std::vector<std::size_t> dims, OutputHead head) : dims_(std::move(dims)), head_(head) {
  if (dims_.size() < 2) throw ConfigError("network needs at least input and output sizes");
  for (std::size_t d : dims_) {
    if (d == 0) throw ConfigError("network layer of width zero");
  }
  offsets_.resize(layer_count());
  std::size_t total = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    offsets_[l] = total;
    total += dims_[l] * dims_[l + 1] + dims_[l + 1];
  }
  params_.assign(total, 0.0);
}

void Mlp::initialize(Rng& rng, bool zero_output_layer) {
  std::fill(params_.begin(), params_.end(), 0.0);
  for (std::size_t l = 0; l < layer_count(); ++l) {
    if (zero_output_layer && l + 1 == layer_count()) break;
    const double limit =
        std::sqrt(6.0 / static_cast<double>(dims_[l] + dims_[l + 1]));
    std::uniform_real_distribution<double> u(-limit, limit);
    const std::size_t n = dims_[l] * dims_[l + 1];
    for (std::size_t i = 0; i < n; ++i) params_[weight_offset(l) + i] = u(rng);
  }
}

void Mlp::forward(std::span<const double> input, Cache& cache) const {
  if (input.size() != input_size()) {
    throw DimensionError("network input has " + std::to_string(input.size()) +
                         " entries, expected " + std::to_string(input_size()));
  }
  cache.activations.resize(dims_.size());
  cache.activations[0].assign(input.begin(), input.end());
  for (std::size_t l = 0; l < layer_count(); ++l) {
    const std::size_t in = dims_[l];
    const std::size_t out = dims_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    const double* b = params_.data() + bias_offset(l);
    const auto& x = cache.activations[l];
    auto& y = cache.activations[l + 1];
    y.resize(out);
    for (std::size_t o = 0; o < out; ++o) y[o] = simd::dot(w + o * in, x.data(), in) + b[o];
    if (l + 1 < layer_count()) {
      for (double& v : y) v = std::tanh(v);
    } else {
      cache.pre_output = y;
      if (head_ == OutputHead::kPhase) {
        for (double& v : y) v = wrap_angle(kPi * std::tanh(v));
      }
    }
  }
}

std::vector<double> Mlp::forward(std::span<const double> input) const {
  Cache cache;
  forward(input, cache);
  return std::move(cache.activations.back());
}

void Mlp::backward(const Cache& cache, std::span<const double> grad_output,
                   std::span<double> grad_params, std::span<double> grad_input) const {
  const bool param_grads = !grad_params.empty();
  if (grad_output.size() != output_size() || (param_grads && grad_params.size() != params_.size())) {
    throw DimensionError("backward: gradient buffer sizes do not match the network");
  }
  // delta = dL/dz for the current layer.
  std::vector<double> delta(grad_output.begin(), grad_output.end());
  if (head_ == OutputHead::kPhase) {
    for (std::size_t i = 0; i < delta.size(); ++i) {
      const double t = std::tanh(cache.pre_output[i]);
      delta[i] *= kPi * (1.0 - t * t);
    }
  }
  std::vector<double> prev;
  for (std::size_t l = layer_count(); l-- > 0;) {
    const std::size_t in = dims_[l];
    const std::size_t out = dims_[l + 1];
    const double* w = params_.data() + weight_offset(l);
    double* gw = param_grads ? grad_params.data() + weight_offset(l) : nullptr;
    double* gb = param_grads ? grad_params.data() + bias_offset(l) : nullptr;
    const auto& x = cache.activations[l];
    const bool need_input_grad = l > 0 || !grad_input.empty();
    if (need_input_grad) prev.assign(in, 0.0);
    for (std::size_t o = 0; o < out; ++o) {
      if (param_grads) {
        gb[o] += delta[o];
        simd::axpy(delta[o], x.data(), gw + o * in, in);
      }
      if (need_input_grad) simd::axpy(delta[o], w + o * in, prev.data(), in);
    }
    if (l > 0) {
      // Through the tanh of the previous layer.
      for (std::size_t i = 0; i < in; ++i) prev[i] *= 1.0 - x[i] * x[i];
      delta.swap(prev);
    } else if (!grad_input.empty()) {
      if (grad_input.size() != in) throw DimensionError("backward: input gradient size");
      std::copy(prev.begin(), prev.end(), grad_input.begin());
    }
  }
}

void Mlp::soft_update(const Mlp& source, double tau) {
  if (!same_architecture(source)) throw ConfigError("soft update between different networks");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    params_[i] = tau * source.params_[i] + (1.0 - tau) * params_[i];
  }
}

// ---------------------------------------------------------------------------

Adam::Adam(std::size_t size, double learning_rate)
    : lr_(learning_rate), m_(size, 0.0), v_(size, 0.0) {}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw DimensionError("Adam step: size mismatch");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * grad[i];
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * grad[i] * grad[i];
    params[i] -= lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + eps_);
  }
}

void Adam::reset() {
  t_ = 0;
  std::fill(m_.begin(), m_.end(), 0.0);
  std::fill(v_.begin(), v_.end(), 0.0);
}

}  // namespace ris
