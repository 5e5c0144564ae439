#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "disgan/params.hpp"
#include "disgan/tensor.hpp"

namespace disgan {

class Tape;

/// Handle to a value recorded on a Tape. Cheap to copy; only valid while its
/// tape is alive.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  Tape& tape() const;
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

struct BackwardContext {
  const Tensor& out;
  const std::vector<double>& out_grad;
  std::vector<const Tensor*> in;
  // nullptr for inputs that do not require a gradient
  std::vector<std::vector<double>*> in_grad;
};

using BackwardFn = std::function<void(const BackwardContext&)>;

/// Reverse-mode tape. Built fresh for every forward pass; backward() walks it
/// once and accumulates into the grads of every non-frozen bound parameter.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Binds a parameter as a leaf. Frozen parameters enter as constants.
  Var param(Parameter& p);
  Var record(Tensor value, std::vector<Var> inputs, BackwardFn backward);

  void backward(Var loss);

  const Tensor& value(Var v) const;
  bool requires_grad(Var v) const;
  /// Gradient of the last backward() target with respect to v (zeros if unreached).
  std::vector<double> grad(Var v) const;
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    std::vector<double> grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
    bool requires_grad = false;
  };

  void check_owner(Var v) const;

  std::vector<Node> nodes_;
};

// Forward ops. All operands are rank-2 tensors from the same tape.
Var matmul(Var a, Var b);
/// Elementwise sum; b may also be a (1 x cols) row broadcast over a's rows.
Var add(Var a, Var b);
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var concat_last_axis(Var a, Var b);
Var relu(Var a);
Var tanh(Var a);
Var square(Var a);
Var abs_elem(Var a);
/// sqrt with a zero subgradient at 0, so clamped distances stay finite.
Var sqrt_elem(Var a);
Var mean_all(Var a);
/// (rows x cols) -> (rows x 1)
Var sum_last_axis(Var a);
Var scale(Var a, double s);
Var add_scalar(Var a, double s);

}  // namespace disgan
