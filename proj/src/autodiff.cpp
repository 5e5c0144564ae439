#include "disgan/autodiff.hpp"

#include <cmath>
#include <stdexcept>

namespace disgan {

const Tensor& Var::value() const { return tape().value(*this); }

Tape& Var::tape() const {
  if (!tape_) throw std::logic_error("use of an unbound Var");
  return *tape_;
}

void Tape::check_owner(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) throw std::logic_error("Var does not belong to this tape");
}

Var Tape::constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, {}, {}, nullptr, false});
  return Var(this, nodes_.size() - 1);
}

Var Tape::param(Parameter& p) {
  if (p.frozen) return constant(p.tensor);
  nodes_.push_back(Node{p.tensor, {}, {}, {}, &p, true});
  return Var(this, nodes_.size() - 1);
}

Var Tape::record(Tensor value, std::vector<Var> inputs, BackwardFn backward) {
  Node node{std::move(value), {}, {}, std::move(backward), nullptr, false};
  node.inputs.reserve(inputs.size());
  for (const auto& v : inputs) {
    check_owner(v);
    node.inputs.push_back(v.id_);
    node.requires_grad = node.requires_grad || nodes_[v.id_].requires_grad;
  }
  if (!node.requires_grad) node.backward = nullptr;
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

const Tensor& Tape::value(Var v) const {
  check_owner(v);
  return nodes_[v.id_].value;
}

bool Tape::requires_grad(Var v) const {
  check_owner(v);
  return nodes_[v.id_].requires_grad;
}

std::vector<double> Tape::grad(Var v) const {
  check_owner(v);
  const auto& n = nodes_[v.id_];
  if (n.grad.empty()) return std::vector<double>(n.value.size(), 0.0);
  return n.grad;
}

void Tape::backward(Var loss) {
  if (nodes_.empty()) throw std::logic_error("backward on an empty tape");
  check_owner(loss);
  if (nodes_[loss.id_].value.size() != 1) {
    throw ShapeError("backward needs a scalar loss, got shape " + shape_string(nodes_[loss.id_].value.shape()));
  }
  for (auto& n : nodes_) n.grad.clear();
  if (!nodes_[loss.id_].requires_grad) return;

  nodes_[loss.id_].grad.assign(1, 1.0);
  for (std::size_t i = loss.id_ + 1; i-- > 0;) {
    Node& n = nodes_[i];
    if (n.grad.empty() || !n.backward) continue;
    BackwardContext ctx{n.value, n.grad, {}, {}};
    for (auto in : n.inputs) {
      Node& src = nodes_[in];
      ctx.in.push_back(&src.value);
      if (src.requires_grad) {
        if (src.grad.empty()) src.grad.assign(src.value.size(), 0.0);
        ctx.in_grad.push_back(&src.grad);
      } else {
        ctx.in_grad.push_back(nullptr);
      }
    }
    n.backward(ctx);
  }

  for (auto& n : nodes_) {
    if (!n.param || n.grad.empty() || n.param->frozen) continue;
    auto& g = n.param->tensor.grad();
    for (std::size_t k = 0; k < g.size(); ++k) g[k] += n.grad[k];
  }
}

namespace {

Tape& common_tape(Var a, Var b) {
  if (&a.tape() != &b.tape()) throw std::logic_error("operands recorded on different tapes");
  return a.tape();
}

void require_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) throw ShapeError(op, a.shape(), b.shape());
}

template <typename F, typename DF>
Var unary(Var a, F f, DF df) {
  const Tensor& x = a.value();
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
  return a.tape().record(std::move(out), {a}, [df](const BackwardContext& c) {
    if (!c.in_grad[0]) return;
    auto& g = *c.in_grad[0];
    const Tensor& x = *c.in[0];
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += c.out_grad[i] * df(x[i], c.out[i]);
  });
}

}  // namespace

Var matmul(Var a, Var b) {
  Tape& tape = common_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  if (x.cols() != y.rows()) throw ShapeError("matmul", x.shape(), y.shape());
  const std::size_t n = x.rows(), k = x.cols(), m = y.cols();
  Tensor out({n, m});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double xv = x[i * k + p];
      for (std::size_t j = 0; j < m; ++j) out[i * m + j] += xv * y[p * m + j];
    }
  }
  return tape.record(std::move(out), {a, b}, [n, k, m](const BackwardContext& c) {
    const Tensor& x = *c.in[0];
    const Tensor& y = *c.in[1];
    const auto& g = c.out_grad;
    if (auto* gx = c.in_grad[0]) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          for (std::size_t j = 0; j < m; ++j) s += g[i * m + j] * y[p * m + j];
          (*gx)[i * k + p] += s;
        }
    }
    if (auto* gy = c.in_grad[1]) {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double xv = x[i * k + p];
          for (std::size_t j = 0; j < m; ++j) (*gy)[p * m + j] += xv * g[i * m + j];
        }
    }
  });
}

Var add(Var a, Var b) {
  Tape& tape = common_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  const bool broadcast = x.shape() != y.shape() && y.rows() == 1 && y.cols() == x.cols();
  if (!broadcast) require_same_shape("add", x, y);
  const std::size_t cols = x.cols();
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + (broadcast ? y[i % cols] : y[i]);
  return tape.record(std::move(out), {a, b}, [broadcast, cols](const BackwardContext& c) {
    const auto& g = c.out_grad;
    if (auto* gx = c.in_grad[0])
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
    if (auto* gy = c.in_grad[1])
      for (std::size_t i = 0; i < g.size(); ++i) (*gy)[broadcast ? i % cols : i] += g[i];
  });
}

Var sub(Var a, Var b) {
  Tape& tape = common_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require_same_shape("sub", x, y);
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return tape.record(std::move(out), {a, b}, [](const BackwardContext& c) {
    const auto& g = c.out_grad;
    if (auto* gx = c.in_grad[0])
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i];
    if (auto* gy = c.in_grad[1])
      for (std::size_t i = 0; i < g.size(); ++i) (*gy)[i] -= g[i];
  });
}

Var mul(Var a, Var b) {
  Tape& tape = common_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  require_same_shape("mul", x, y);
  Tensor out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * y[i];
  return tape.record(std::move(out), {a, b}, [](const BackwardContext& c) {
    const auto& g = c.out_grad;
    if (auto* gx = c.in_grad[0])
      for (std::size_t i = 0; i < g.size(); ++i) (*gx)[i] += g[i] * (*c.in[1])[i];
    if (auto* gy = c.in_grad[1])
      for (std::size_t i = 0; i < g.size(); ++i) (*gy)[i] += g[i] * (*c.in[0])[i];
  });
}

Var concat_last_axis(Var a, Var b) {
  Tape& tape = common_tape(a, b);
  const Tensor& x = a.value();
  const Tensor& y = b.value();
  if (x.rows() != y.rows()) throw ShapeError("concat_last_axis", x.shape(), y.shape());
  const std::size_t rows = x.rows(), ca = x.cols(), cb = y.cols();
  Tensor out({rows, ca + cb});
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t j = 0; j < ca; ++j) out[r * (ca + cb) + j] = x[r * ca + j];
    for (std::size_t j = 0; j < cb; ++j) out[r * (ca + cb) + ca + j] = y[r * cb + j];
  }
  return tape.record(std::move(out), {a, b}, [rows, ca, cb](const BackwardContext& c) {
    const auto& g = c.out_grad;
    if (auto* gx = c.in_grad[0])
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < ca; ++j) (*gx)[r * ca + j] += g[r * (ca + cb) + j];
    if (auto* gy = c.in_grad[1])
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cb; ++j) (*gy)[r * cb + j] += g[r * (ca + cb) + ca + j];
  });
}

Var relu(Var a) {
  return unary(a, [](double x) { return x > 0.0 ? x : 0.0; }, [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var tanh(Var a) {
  return unary(a, [](double x) { return std::tanh(x); }, [](double, double y) { return 1.0 - y * y; });
}

Var square(Var a) {
  return unary(a, [](double x) { return x * x; }, [](double x, double) { return 2.0 * x; });
}

Var abs_elem(Var a) {
  return unary(
      a, [](double x) { return std::abs(x); },
      [](double x, double) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); });
}

Var sqrt_elem(Var a) {
  return unary(
      a,
      [](double x) {
        if (x < 0.0) throw std::domain_error("sqrt_elem of a negative value");
        return std::sqrt(x);
      },
      [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Var mean_all(Var a) {
  const Tensor& x = a.value();
  double s = 0.0;
  for (double v : x.values()) s += v;
  const double n = static_cast<double>(x.size());
  return a.tape().record(Tensor::scalar(s / n), {a}, [n](const BackwardContext& c) {
    if (auto* gx = c.in_grad[0]) {
      const double g = c.out_grad[0] / n;
      for (auto& v : *gx) v += g;
    }
  });
}

Var sum_last_axis(Var a) {
  const Tensor& x = a.value();
  const std::size_t rows = x.rows(), cols = x.cols();
  Tensor out({rows, 1});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < cols; ++j) out[r] += x[r * cols + j];
  return a.tape().record(std::move(out), {a}, [rows, cols](const BackwardContext& c) {
    if (auto* gx = c.in_grad[0])
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < cols; ++j) (*gx)[r * cols + j] += c.out_grad[r];
  });
}

Var scale(Var a, double s) {
  return unary(a, [s](double x) { return s * x; }, [s](double, double) { return s; });
}

Var add_scalar(Var a, double s) {
  return unary(a, [s](double x) { return x + s; }, [](double, double) { return 1.0; });
}

}  // namespace disgan
