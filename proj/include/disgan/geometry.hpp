#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "disgan/autodiff.hpp"
#include "disgan/classifier.hpp"

namespace disgan {

struct GeometryOptions {
  /// Divide the vertical distance by ||w_aux||, turning the functional margin
  /// into a geometric one. Off by default.
  bool normalize_vertical = false;
};

enum class DistanceKind { vertical, horizontal, coordinate };

/// Which way a conditioning scalar points. Vertical distances use
/// toward_y / toward_x, horizontal ones use forward / inverse.
enum class Direction { toward_y, toward_x, forward, inverse };

struct DistanceTag {
  DistanceKind kind;
  double magnitude;
};

struct HorizontalDistance {
  double value = 0.0;
  bool clamped = false;  // radicand was negative and has been replaced by 0
};

/// Running count of negative radicands seen by horizontal_distance.
struct ClampCounter {
  std::size_t events = 0;
  std::size_t evaluations = 0;
};

double vertical_distance(const AuxiliaryClassifier& aux, std::span<const double> z, const GeometryOptions& opt = {});
double coordinate_distance(const AuxiliaryClassifier& aux, std::span<const double> z1, std::span<const double> z2);
HorizontalDistance horizontal_distance(const AuxiliaryClassifier& aux, std::span<const double> z1,
                                       std::span<const double> z2, const GeometryOptions& opt = {},
                                       ClampCounter* counter = nullptr);

double conditioning_scalar(DistanceKind kind, Direction direction, double magnitude);
inline double conditioning_scalar(const DistanceTag& tag, Direction direction) {
  return conditioning_scalar(tag.kind, direction, tag.magnitude);
}

// Batched versions, rows of (B x D) matrices; results are (B x 1).
Tensor vertical_distances(const AuxiliaryClassifier& aux, const Tensor& z, const GeometryOptions& opt = {});
Tensor horizontal_distances(const AuxiliaryClassifier& aux, const Tensor& z1, const Tensor& z2,
                            const GeometryOptions& opt = {}, ClampCounter* counter = nullptr);

// On-tape versions for distances measured on generated samples. The aux
// weights are constants; gradients flow only into the sample arguments.
Var vertical_distance(const AuxiliaryClassifier& aux, Tape& tape, Var z, const GeometryOptions& opt = {});
Var squared_coordinate_distance(const AuxiliaryClassifier& aux, Tape& tape, Var z1, Var z2);
Var horizontal_distance(const AuxiliaryClassifier& aux, Tape& tape, Var z1, Var z2, const GeometryOptions& opt = {},
                        ClampCounter* counter = nullptr);

}  // namespace disgan
