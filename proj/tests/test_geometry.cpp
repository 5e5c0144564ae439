#include "doctest.h"

#include <cmath>

#include "disgan/geometry.hpp"
#include "support.hpp"

using namespace disgan;
using namespace disgan::testing;

namespace {

AuxiliaryClassifier linear_aux(std::vector<double> w, double b = 0.0) {
  return freeze(ClassifierNet::linear(std::move(w), b));
}

}  // namespace

TEST_CASE("vertical distance") {
  const auto aux = linear_aux({3.0, 4.0});
  const std::vector<double> z{1.0, 1.0};
  CHECK(vertical_distance(aux, z) == 7.0);
  CHECK(vertical_distance(aux, z, GeometryOptions{true}) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(vertical_distance(aux, std::vector<double>{4.0, -3.0}) == 0.0);
  CHECK(vertical_distance(aux, std::vector<double>{-1.0, -1.0}) == 7.0);
}

TEST_CASE("coordinate distance") {
  const auto aux = linear_aux({1.0, 0.0});
  CHECK(coordinate_distance(aux, std::vector<double>{0, 0}, std::vector<double>{3, 4}) == 5.0);
  CHECK(coordinate_distance(aux, std::vector<double>{2, 1}, std::vector<double>{2, 1}) == 0.0);

  Rng rng(21);
  const auto mlp = freeze(tiny_classifier(rng, 3, 6));
  for (int t = 0; t < 30; ++t) {
    const auto a = random_point(rng, 3), b = random_point(rng, 3);
    const auto fa = mlp.features(a), fb = mlp.features(b);
    double ss = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) ss += (fa[i] - fb[i]) * (fa[i] - fb[i]);
    CHECK(coordinate_distance(mlp, a, b) == doctest::Approx(std::sqrt(ss)).epsilon(1e-12));
  }
}

TEST_CASE("horizontal distance: 3-4-5, identity and the clamp") {
  const auto aux = linear_aux({1.0, 0.0});
  auto h = horizontal_distance(aux, std::vector<double>{0, 0}, std::vector<double>{3, 4});
  CHECK(h.value == doctest::Approx(4.0).epsilon(1e-15));
  CHECK_FALSE(h.clamped);

  h = horizontal_distance(aux, std::vector<double>{1, 2}, std::vector<double>{1, 2});
  CHECK(h.value == 0.0);
  CHECK_FALSE(h.clamped);

  // w = (2, 0): d_coor = 1 but the vertical gap is 2, radicand 1 - 4 = -3
  const auto steep = linear_aux({2.0, 0.0});
  ClampCounter counter;
  h = horizontal_distance(steep, std::vector<double>{0, 0}, std::vector<double>{1, 0}, {}, &counter);
  CHECK(h.value == 0.0);
  CHECK(h.clamped);
  CHECK(counter.events == 1);
  CHECK(counter.evaluations == 1);

  // normalising the margin removes that pathology
  h = horizontal_distance(steep, std::vector<double>{0, 0}, std::vector<double>{1, 0}, GeometryOptions{true});
  CHECK(h.value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(h.clamped);
}

TEST_CASE("distances are symmetric and the coordinate distance is a metric") {
  Rng rng(22);
  const auto aux = freeze(tiny_classifier(rng, 2, 4));
  for (int t = 0; t < 100; ++t) {
    const auto a = random_point(rng, 2), b = random_point(rng, 2), c = random_point(rng, 2);
    CHECK(coordinate_distance(aux, a, b) == coordinate_distance(aux, b, a));
    CHECK(horizontal_distance(aux, a, b).value == doctest::Approx(horizontal_distance(aux, b, a).value));
    CHECK(coordinate_distance(aux, a, c) <= coordinate_distance(aux, a, b) + coordinate_distance(aux, b, c) + 1e-12);
    CHECK(vertical_distance(aux, a) >= 0.0);
  }
}

TEST_CASE("conditioning signs") {
  CHECK(conditioning_scalar(DistanceKind::vertical, Direction::toward_y, 2.2) == 2.2);
  CHECK(conditioning_scalar(DistanceKind::vertical, Direction::toward_x, 2.2) == -2.2);
  CHECK(conditioning_scalar(DistanceKind::horizontal, Direction::forward, 4.0) == -4.0);
  CHECK(conditioning_scalar(DistanceKind::horizontal, Direction::inverse, 4.0) == 4.0);
  CHECK_THROWS(conditioning_scalar(DistanceKind::vertical, Direction::toward_y, -1.0));
}

TEST_CASE("batched and on-tape distances agree with the scalar ones") {
  Rng rng(23);
  const auto aux = freeze(tiny_classifier(rng, 2, 4));
  const GeometryOptions geo{true};
  const Tensor z1 = random_matrix(rng, 6, 2), z2 = random_matrix(rng, 6, 2);
  const Tensor dv = vertical_distances(aux, z1, geo);
  const Tensor dh = horizontal_distances(aux, z1, z2, geo);
  Tape tape;
  const Tensor dv_tape = tape.value(vertical_distance(aux, tape, tape.constant(z1), geo));
  const Tensor dh_tape = tape.value(horizontal_distance(aux, tape, tape.constant(z1), tape.constant(z2), geo));
  for (std::size_t r = 0; r < 6; ++r) {
    const std::vector<double> a{z1.at(r, 0), z1.at(r, 1)}, b{z2.at(r, 0), z2.at(r, 1)};
    CHECK(dv[r] == doctest::Approx(vertical_distance(aux, a, geo)).epsilon(1e-12));
    CHECK(dh[r] == doctest::Approx(horizontal_distance(aux, a, b, geo).value).epsilon(1e-12));
    CHECK(dv_tape[r] == doctest::Approx(dv[r]).epsilon(1e-12));
    CHECK(dh_tape[r] == doctest::Approx(dh[r]).epsilon(1e-9));
  }
}
