#include "disgan/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace disgan {

namespace {

double vertical_scale(const AuxiliaryClassifier& aux, const GeometryOptions& opt) {
  if (!opt.normalize_vertical) return 1.0;
  if (aux.w_norm() == 0.0) throw std::domain_error("cannot normalize vertical distance: ||w_aux|| = 0");
  return 1.0 / aux.w_norm();
}

void count_clamps(const Tensor& radicand, ClampCounter* counter) {
  if (!counter) return;
  for (double r : radicand.values()) {
    ++counter->evaluations;
    counter->events += r < 0.0;
  }
}

}  // namespace

double vertical_distance(const AuxiliaryClassifier& aux, std::span<const double> z, const GeometryOptions& opt) {
  const double s = std::abs(aux.score(z));
  return opt.normalize_vertical ? s * vertical_scale(aux, opt) : s;
}

namespace {

double squared_coordinate_distance(const AuxiliaryClassifier& aux, std::span<const double> z1,
                                   std::span<const double> z2) {
  if (z1.size() != z2.size()) throw ShapeError("coordinate_distance", {1, z1.size()}, {1, z2.size()});
  const auto f1 = aux.features(z1);
  const auto f2 = aux.features(z2);
  double s = 0.0;
  for (std::size_t i = 0; i < f1.size(); ++i) s += (f1[i] - f2[i]) * (f1[i] - f2[i]);
  return s;
}

}  // namespace

double coordinate_distance(const AuxiliaryClassifier& aux, std::span<const double> z1, std::span<const double> z2) {
  return std::sqrt(squared_coordinate_distance(aux, z1, z2));
}

HorizontalDistance horizontal_distance(const AuxiliaryClassifier& aux, std::span<const double> z1,
                                       std::span<const double> z2, const GeometryOptions& opt,
                                       ClampCounter* counter) {
  const double dv = vertical_distance(aux, z1, opt) - vertical_distance(aux, z2, opt);
  const double radicand = squared_coordinate_distance(aux, z1, z2) - dv * dv;
  if (counter) {
    ++counter->evaluations;
    counter->events += radicand < 0.0;
  }
  if (radicand < 0.0) return {0.0, true};
  return {std::sqrt(radicand), false};
}

double conditioning_scalar(DistanceKind kind, Direction direction, double magnitude) {
  if (!(magnitude >= 0.0)) throw std::invalid_argument("conditioning magnitude must be >= 0");
  switch (kind) {
    case DistanceKind::vertical:
      if (direction == Direction::toward_y) return magnitude;
      if (direction == Direction::toward_x) return -magnitude;
      break;
    case DistanceKind::horizontal:
      if (direction == Direction::forward) return -magnitude;
      if (direction == Direction::inverse) return magnitude;
      break;
    case DistanceKind::coordinate:
      throw std::invalid_argument("coordinate distances are not used for conditioning");
  }
  throw std::invalid_argument("direction does not apply to this distance kind");
}

Tensor vertical_distances(const AuxiliaryClassifier& aux, const Tensor& z, const GeometryOptions& opt) {
  Tape tape;
  return vertical_distance(aux, tape, tape.constant(z), opt).value();
}

Tensor horizontal_distances(const AuxiliaryClassifier& aux, const Tensor& z1, const Tensor& z2,
                            const GeometryOptions& opt, ClampCounter* counter) {
  Tape tape;
  return horizontal_distance(aux, tape, tape.constant(z1), tape.constant(z2), opt, counter).value();
}

Var vertical_distance(const AuxiliaryClassifier& aux, Tape& tape, Var z, const GeometryOptions& opt) {
  Var d = abs_elem(aux.score(tape, z));
  return opt.normalize_vertical ? scale(d, vertical_scale(aux, opt)) : d;
}

Var squared_coordinate_distance(const AuxiliaryClassifier& aux, Tape& tape, Var z1, Var z2) {
  return sum_last_axis(square(sub(aux.features(tape, z1), aux.features(tape, z2))));
}

Var horizontal_distance(const AuxiliaryClassifier& aux, Tape& tape, Var z1, Var z2, const GeometryOptions& opt,
                        ClampCounter* counter) {
  Var dv = sub(vertical_distance(aux, tape, z1, opt), vertical_distance(aux, tape, z2, opt));
  Var radicand = sub(squared_coordinate_distance(aux, tape, z1, z2), square(dv));
  count_clamps(radicand.value(), counter);
  return sqrt_elem(relu(radicand));
}

}  // namespace disgan
