#pragma once

// Small fully connected networks with tanh hidden layers, trained by
// backpropagation. Parameters live in one flat array (per layer: weights
// row-major out x in, then biases) so optimizers and checkpoints can treat
// them uniformly.

#include <cstddef>
#include <span>
#include <vector>

#include "ris/rng.hpp"

namespace ris {

enum class OutputHead {
  kLinear,  // y = z
  kPhase,   // y = wrap(pi * tanh(z)), always in (-pi, pi]
};

class Mlp {
 public:
  Mlp() = default;
  /// dims = {in, hidden..., out}; at least two entries.
  Mlp(std::vector<std::size_t> dims, OutputHead head);

  /// Xavier-uniform weights, zero biases. With zero_output_layer the last
  /// layer's weights are zeroed as well.
  void initialize(Rng& rng, bool zero_output_layer = false);

  std::span<const std::size_t> dims() const { return dims_; }
  OutputHead head() const { return head_; }
  std::size_t input_size() const { return dims_.front(); }
  std::size_t output_size() const { return dims_.back(); }
  std::size_t layer_count() const { return dims_.size() - 1; }
  std::size_t parameter_count() const { return params_.size(); }

  std::span<double> parameters() { return params_; }
  std::span<const double> parameters() const { return params_; }

  /// Activations of every layer from one forward pass.
  struct Cache {
    std::vector<std::vector<double>> activations;  // [0] = input, back() = output
    std::vector<double> pre_output;                // z of the last layer
  };

  void forward(std::span<const double> input, Cache& cache) const;
  std::vector<double> forward(std::span<const double> input) const;

  /// Accumulates dL/dparams into grad_params (same layout as parameters())
  /// given dL/doutput; an empty grad_params skips the parameter gradient.
  /// If grad_input is non-empty it receives dL/dinput.
  void backward(const Cache& cache, std::span<const double> grad_output,
                std::span<double> grad_params, std::span<double> grad_input = {}) const;

  bool same_architecture(const Mlp& other) const {
    return dims_ == other.dims_ && head_ == other.head_;
  }

  /// this = tau * source + (1 - tau) * this.
  void soft_update(const Mlp& source, double tau);

  bool operator==(const Mlp&) const = default;

 private:
  std::size_t weight_offset(std::size_t layer) const { return offsets_[layer]; }
  std::size_t bias_offset(std::size_t layer) const {
    return offsets_[layer] + dims_[layer] * dims_[layer + 1];
  }

  std::vector<std::size_t> dims_;
  std::vector<std::size_t> offsets_;
  OutputHead head_ = OutputHead::kLinear;
  std::vector<double> params_;
};

/// Adam optimizer state for one parameter array.
class Adam {
 public:
  Adam() = default;
  Adam(std::size_t size, double learning_rate);

  /// Descends along grad (params -= lr * m_hat / (sqrt(v_hat) + eps)).
  void step(std::span<double> params, std::span<const double> grad);
  void reset();

  double learning_rate() const { return lr_; }
  std::size_t steps() const { return t_; }

 private:
  double lr_ = 1e-3;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  std::size_t t_ = 0;
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace ris
