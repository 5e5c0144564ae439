#include "doctest.h"

#include <cmath>

#include "disgan/classifier.hpp"
#include "disgan/datagen.hpp"
#include "support.hpp"

using namespace disgan;
using namespace disgan::testing;

TEST_CASE("hinge loss arithmetic") {
  CHECK(hinge_loss(std::vector<double>{2.0}, std::vector<double>{1.0}) == 0.0);
  CHECK(hinge_loss(std::vector<double>{0.5}, std::vector<double>{1.0}) == 0.5);
  CHECK(hinge_loss(std::vector<double>{0.5, -2.0}, std::vector<double>{-1.0, -1.0}) == 0.75);
  CHECK_THROWS(hinge_loss(std::vector<double>{}, std::vector<double>{}));
}

TEST_CASE("linear net: score is a dot product, features are the input") {
  const auto net = ClassifierNet::linear({3.0, 4.0}, 0.0);
  const std::vector<double> z{1.0, 1.0};
  CHECK(net.score(z) == 7.0);
  CHECK(net.features(z) == z);
  CHECK_THROWS_AS(net.score(std::vector<double>{1.0}), ShapeError);
}

TEST_CASE("score equals w . features + b for an MLP extractor") {
  Rng rng(3);
  const auto aux = freeze(tiny_classifier(rng, 3, 5));
  for (int t = 0; t < 50; ++t) {
    const auto z = random_point(rng, 3, 2.0);
    const auto f = aux.features(z);
    REQUIRE(f.size() == aux.w().size());
    double s = aux.b();
    for (std::size_t i = 0; i < f.size(); ++i) s += aux.w()[i] * f[i];
    CHECK(aux.score(z) == doctest::Approx(s).epsilon(1e-12));
  }
}

TEST_CASE("separable gaussians reach full training accuracy") {
  DatasetSpec spec;
  spec.generator = "gaussians";
  spec.count_x = spec.count_y = 100;
  spec.noise = 0.3;
  spec.separation = 6.0;
  Rng data_rng(1), rng(2);
  const auto data = generate_dataset(spec, data_rng);

  // Oracle: the sampled points are separable by the axis-1 midline.
  bool separable = true;
  for (const auto& s : data.samples()) separable = separable && (s.features[0] > 0.0) == (s.label == 1);
  REQUIRE(separable);

  ClassifierTrainConfig cfg;
  cfg.epochs = 20;
  cfg.warm_epochs = 10;
  const auto res = train_classifier(data, ClassifierArch{2}, cfg, rng);
  CHECK(training_accuracy(res.net, data) == 1.0);
  CHECK(res.epoch_loss.size() == 20);
}

TEST_CASE("one sample per domain: linear net reaches both margins") {
  Dataset d(2);
  d.add({-1.0, 0.5}, -1);
  d.add({1.0, -0.5}, 1);
  ClassifierTrainConfig cfg;
  cfg.epochs = 200;
  cfg.warm_epochs = 100;
  Rng rng(4);
  const auto res = train_classifier(d, ClassifierArch{2, true}, cfg, rng);
  CHECK(res.net.score(d[0].features) <= -1.0 + 1e-9);
  CHECK(res.net.score(d[1].features) >= 1.0 - 1e-9);
  CHECK(res.epoch_loss.back() == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identical features with opposite labels cannot go below loss 1") {
  Dataset d(2);
  d.add({0.3, 0.3}, -1);
  d.add({0.3, 0.3}, 1);
  ClassifierTrainConfig cfg;
  cfg.epochs = 30;
  cfg.warm_epochs = 15;
  Rng rng(5);
  const auto res = train_classifier(d, ClassifierArch{2}, cfg, rng);
  const auto s = res.net.scores(d.features());
  // max(0, 1 - s) + max(0, 1 + s) >= 2 for every s
  CHECK(hinge_loss(s, d.labels_real()) >= 1.0 - 1e-12);
  for (double l : res.epoch_loss) CHECK(l >= 1.0 - 1e-12);
}

TEST_CASE("single-domain data is rejected") {
  Dataset d(2);
  d.add({0.0, 0.0}, 1);
  d.add({1.0, 0.0}, 1);
  Rng rng(6);
  CHECK_THROWS(train_classifier(d, ClassifierArch{2}, ClassifierTrainConfig{}, rng));
}

TEST_CASE("freeze copies the net and ignores later training") {
  Rng rng(7);
  auto net = tiny_classifier(rng);
  const AuxiliaryClassifier aux = freeze(net);
  const std::vector<std::vector<double>> probes{{0.1, 0.2}, {-1.0, 3.0}, {2.5, -0.7}};
  std::vector<double> before;
  for (const auto& z : probes) {
    CHECK(aux.score(z) == net.score(z));
    before.push_back(aux.score(z));
  }
  for (const auto* ps : aux.net().param_sets())
    for (const auto& p : ps->items()) CHECK(p.frozen);

  // 100 steps on the original; the frozen copy must not move.
  ClassifierOptimizer opt;
  const Tensor x = random_matrix(rng, 8, 2);
  const std::vector<double> y{1, -1, 1, -1, 1, -1, 1, -1};
  for (int i = 0; i < 100; ++i) hinge_step(net, opt, x, y, 1e-2);
  for (std::size_t i = 0; i < probes.size(); ++i) CHECK(aux.score(probes[i]) == before[i]);
  CHECK(net.score(probes[0]) != before[0]);
}

TEST_CASE("aux weights: tape gradients reach the input only") {
  Rng rng(8);
  const auto aux = freeze(tiny_classifier(rng));
  Parameter z{"z", Tensor::row({0.4, -0.2})};
  Tape tape;
  tape.backward(mean_all(aux.score(tape, tape.param(z))));
  CHECK(z.tensor.has_grad());
  for (const auto* ps : aux.net().param_sets())
    for (const auto& p : ps->items()) CHECK_FALSE(p.tensor.has_grad());
}
