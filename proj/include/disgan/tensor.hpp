#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace disgan {

using Shape = std::vector<std::size_t>;

std::string shape_string(const Shape& shape);

/// Raised for any shape disagreement between operands; the message carries both shapes.
class ShapeError : public std::invalid_argument {
 public:
  ShapeError(const std::string& op, const Shape& a, const Shape& b);
  explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

/// Dense row-major array of doubles with an optional gradient buffer.
///
/// Every op in the autodiff layer works on rank-2 tensors; a batch of
/// D-dimensional vectors is a (B x D) matrix and a scalar is (1 x 1).
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values);
  explicit Tensor(Shape shape, double fill = 0.0);

  static Tensor matrix(std::size_t rows, std::size_t cols, std::initializer_list<double> values);
  static Tensor scalar(double v) { return Tensor({1, 1}, {v}); }
  static Tensor row(const std::vector<double>& values);
  static Tensor column(const std::vector<double>& values);

  const Shape& shape() const { return shape_; }
  std::size_t size() const { return values_.size(); }
  std::size_t rank() const { return shape_.size(); }
  std::size_t rows() const;
  std::size_t cols() const;

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double> row_values(std::size_t r) const;

  bool has_grad() const { return grad_.has_value(); }
  std::vector<double>& grad();  // allocates zeros on first access
  const std::vector<double>& grad() const;
  void clear_grad() { grad_.reset(); }

  double item() const;

 private:
  Shape shape_;
  std::vector<double> values_;
  std::optional<std::vector<double>> grad_;
};

}  // namespace disgan
