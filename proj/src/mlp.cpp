#include "disgan/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace disgan {

std::string to_string(Activation a) {
  switch (a) {
    case Activation::identity:
      return "identity";
    case Activation::tanh:
      return "tanh";
    case Activation::relu:
      return "relu";
  }
  return "identity";
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "tanh") return Activation::tanh;
  if (s == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation: " + s);
}

Var apply_activation(Activation a, Var x) {
  switch (a) {
    case Activation::tanh:
      return tanh(x);
    case Activation::relu:
      return relu(x);
    case Activation::identity:
      break;
  }
  return x;
}

Mlp::Mlp(std::vector<std::size_t> widths, std::vector<Activation> activations, Rng& rng)
    : widths_(std::move(widths)), activations_(std::move(activations)) {
  build(&rng);
}

Mlp::Mlp(std::vector<std::size_t> widths, std::vector<Activation> activations)
    : widths_(std::move(widths)), activations_(std::move(activations)) {
  build(nullptr);
}

void Mlp::build(Rng* rng) {
  if (widths_.size() < 2 || activations_.size() + 1 != widths_.size()) {
    throw std::invalid_argument("Mlp: need one activation per layer and at least one layer");
  }
  for (std::size_t k = 0; k < activations_.size(); ++k) {
    const std::size_t in = widths_[k], out = widths_[k + 1];
    Tensor w({in, out});
    if (rng) {
      const double s = std::sqrt(6.0 / static_cast<double>(in + out));
      for (auto& v : w.values()) v = rng->uniform(-s, s);
    }
    params_.add("l" + std::to_string(k) + ".w", std::move(w));
    params_.add("l" + std::to_string(k) + ".b", Tensor({1, out}));
  }
}

Var Mlp::forward(Tape& tape, Var x) {
  auto& items = params_.items();
  for (std::size_t k = 0; k < activations_.size(); ++k) {
    Var w = tape.param(items[2 * k]);
    Var b = tape.param(items[2 * k + 1]);
    x = apply_activation(activations_[k], add(matmul(x, w), b));
  }
  return x;
}

Var Mlp::forward_const(Tape& tape, Var x) const {
  const auto& items = params_.items();
  for (std::size_t k = 0; k < activations_.size(); ++k) {
    Var w = tape.constant(items[2 * k].tensor);
    Var b = tape.constant(items[2 * k + 1].tensor);
    x = apply_activation(activations_[k], add(matmul(x, w), b));
  }
  return x;
}

Tensor Mlp::eval(const Tensor& x) const {
  Tape tape;
  return forward_const(tape, tape.constant(x)).value();
}

}  // namespace disgan
