#pragma once

#include <string>
#include <vector>

#include "disgan/autodiff.hpp"
#include "disgan/params.hpp"
#include "disgan/rng.hpp"

namespace disgan {

enum class Activation { identity, tanh, relu };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& s);

/// Fully connected net. Layer k maps widths[k] -> widths[k+1] and applies
/// activations[k]. Weights are Xavier-uniform, biases start at zero.
class Mlp {
 public:
  Mlp() = default;
  Mlp(std::vector<std::size_t> widths, std::vector<Activation> activations, Rng& rng);
  /// Builds the topology with zero weights; used when loading from a file.
  Mlp(std::vector<std::size_t> widths, std::vector<Activation> activations);

  /// Trainable forward pass: parameters are bound so backward() reaches them.
  Var forward(Tape& tape, Var x);
  /// Parameters enter as constants; gradients still flow to x.
  Var forward_const(Tape& tape, Var x) const;
  Tensor eval(const Tensor& x) const;

  std::size_t in_dim() const { return widths_.front(); }
  std::size_t out_dim() const { return widths_.back(); }
  std::size_t layer_count() const { return activations_.size(); }
  const std::vector<std::size_t>& widths() const { return widths_; }
  const std::vector<Activation>& activations() const { return activations_; }

  ParamSet& params() { return params_; }
  const ParamSet& params() const { return params_; }

 private:
  void build(Rng* rng);

  std::vector<std::size_t> widths_;
  std::vector<Activation> activations_;
  ParamSet params_;
};

Var apply_activation(Activation a, Var x);

}  // namespace disgan
