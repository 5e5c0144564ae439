#include "doctest.h"

#include <cmath>

#include "disgan/datagen.hpp"
#include "disgan/model_io.hpp"
#include "disgan/pipeline.hpp"
#include "support.hpp"

using namespace disgan;
using namespace disgan::testing;

namespace {

RunConfig toy(std::uint64_t seed) {
  RunConfig cfg;
  cfg.seed = seed;
  cfg.epochs = cfg.clf_epochs = 2;
  cfg.warm_epochs = cfg.clf_warm_epochs = 1;
  cfg.batch_size = 4;
  cfg.gan_arch.gen_hidden = cfg.gan_arch.disc_hidden = 8;
  return cfg;
}

Dataset blobs(std::size_t nx, std::size_t ny, std::uint64_t seed) {
  DatasetSpec spec;
  spec.generator = "gaussians";
  spec.count_x = nx;
  spec.count_y = ny;
  Rng rng(seed);
  return generate_dataset(spec, rng);
}

std::string archive_text(const AugmentationArchive& a, const std::string& name) {
  const auto path = scratch_dir(name) / "archive.csv";
  write_archive_csv(a, path);
  return read_text_file(path);
}

}  // namespace

TEST_CASE("wrap_index") {
  CHECK(wrap_index(4, 3) == 1);
  CHECK(wrap_index(3, 3) == 3);
  CHECK(wrap_index(7, 5) == 2);
  CHECK(wrap_index(1, 1) == 1);
  CHECK_THROWS(wrap_index(0, 3));
  CHECK_THROWS(wrap_index(2, 0));
}

TEST_CASE("M = 3, N = 5: five iterations, twenty samples per epoch") {
  const auto res = run_algorithm1(blobs(5, 3, 1), toy(1));
  CHECK(res.report.domain_x_size == 5);
  CHECK(res.report.domain_y_size == 3);
  CHECK(res.report.iterations_per_epoch == 5);
  CHECK(res.report.total_iterations == 10);
  CHECK(res.trace.size() == 10);
  CHECK(res.archive.size() == 20);
  CHECK_FALSE(res.report.index_note.empty());
  CHECK(res.report.classifier_epoch_loss.size() == 2);
  CHECK(res.report.cprime_epoch_loss.size() == 2);

  std::vector<std::size_t> x_sources;
  for (const auto& s : res.archive.samples) {
    CHECK(s.label == target_label(s.kind));
    if (s.kind == Mapping::X2Y) {
      CHECK(s.label == 1);
      x_sources.push_back(s.source_index);
    }
  }
  // every x is the source exactly once in the final epoch
  CHECK(x_sources == std::vector<std::size_t>{1, 2, 3, 4, 5});
}

TEST_CASE("the same seed reproduces the archive and trace") {
  const auto data = blobs(6, 4, 2);
  const auto a = run_algorithm1(data, toy(9));
  const auto b = run_algorithm1(data, toy(9));
  CHECK(archive_text(a.archive, "det_a") == archive_text(b.archive, "det_b"));
  CHECK(serialize_classifier(a.c_prime) == serialize_classifier(b.c_prime));
  const auto c = run_algorithm1(data, toy(10));
  CHECK(archive_text(a.archive, "det_a") != archive_text(c.archive, "det_c"));
}

TEST_CASE("train_disgan on the frozen C of a full run gives the same generators") {
  const auto data = blobs(5, 5, 3);
  const auto full = run_algorithm1(data, toy(4));
  const auto gan_only = train_disgan(data, full.aux, toy(4));
  CHECK(serialize_bundle(gan_only.bundle) == serialize_bundle(full.bundle));
  CHECK(archive_text(gan_only.archive, "td_a") == archive_text(full.archive, "td_b"));
}

TEST_CASE("a constant generator degrades gracefully") {
  const auto data = blobs(6, 6, 5);
  const std::vector<double> mid{0.0, 0.0};  // the blobs sit at +-separation/2 on axis 1
  PipelineHooks hooks;
  hooks.on_bundle_created = [&](GanBundle& b) {
    for (auto& g : b.generators) {
      g = Mlp({b.dim() + 1, b.dim()}, {Activation::identity});
      auto& bias = g.params().get("l0.b");
      for (std::size_t j = 0; j < mid.size(); ++j) bias.tensor[j] = mid[j];
      for (auto& p : g.params().items()) p.frozen = true;
    }
  };
  const auto res = run_algorithm1(data, toy(6), hooks);
  CHECK(res.archive.size() == 24);
  for (const auto& s : res.archive.samples) CHECK(s.features == mid);
  // all four generators collapse on every step
  CHECK(res.report.collapse_events == 4 * res.report.total_iterations);
  CHECK(res.report.target_clamp_events <= res.report.distance_evaluations);
  CHECK(res.report.distance_evaluations == 2 * 4 * res.report.total_iterations);
  for (double l : res.report.cprime_epoch_loss) CHECK(std::isfinite(l));
}

TEST_CASE("post-hoc C' mode trains after the loop") {
  auto cfg = toy(7);
  cfg.cprime_mode = CPrimeMode::post_hoc;
  const auto data = blobs(5, 4, 7);
  const auto res = run_algorithm1(data, cfg);
  CHECK(res.report.cprime_epoch_loss.size() == static_cast<std::size_t>(cfg.clf_epochs));
  for (const auto& row : res.trace) CHECK(row.cprime_loss == 0.0);
  CHECK(training_accuracy(res.c_prime, data) > 0.5);
}

TEST_CASE("an empty domain is rejected") {
  Dataset d(2);
  d.add({0.0, 0.0}, 1);
  d.add({1.0, 0.0}, 1);
  CHECK_THROWS(run_algorithm1(d, toy(1)));
}

TEST_CASE("equal-weight hinge update") {
  Rng rng(11);
  const auto base = tiny_classifier(rng);
  Dataset real(2), generated(2);
  real.add({0.5, 0.1}, 1);
  real.add({-0.4, 0.3}, -1);
  real.add({0.2, -0.9}, 1);
  generated.add({1.5, -0.2}, -1);
  generated.add({0.5, 0.1}, 1);  // duplicate of a real sample

  SUBCASE("no generated samples: a plain hinge step") {
    auto a = base, b = base;
    ClassifierOptimizer oa, ob;
    const double la = equal_weight_hinge_update(a, oa, real, Dataset(2), 1e-2);
    const double lb = hinge_step(b, ob, real.features(), real.labels_real(), 1e-2);
    CHECK(la == lb);
    CHECK(serialize_classifier(a) == serialize_classifier(b));
  }

  SUBCASE("loss is the hinge over the union, duplicates counted twice") {
    auto a = base;
    ClassifierOptimizer oa;
    double expected = 0.0;
    for (const auto* d : {&real, &generated})
      for (const auto& s : d->samples()) expected += std::max(0.0, 1.0 - s.label * base.score(s.features));
    expected /= 5.0;
    CHECK(equal_weight_hinge_update(a, oa, real, generated, 1e-2) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("archive CSV round trip and validation") {
  const auto res = run_algorithm1(blobs(3, 3, 12), toy(12));
  const auto dir = scratch_dir("archive_rt");
  write_archive_csv(res.archive, dir / "a.csv");
  const auto back = read_archive_csv(dir / "a.csv");
  REQUIRE(back.size() == res.archive.size());
  CHECK(back.dim == 2);
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back.samples[i].features == res.archive.samples[i].features);
    CHECK(back.samples[i].conditioning == res.archive.samples[i].conditioning);
    CHECK(back.samples[i].kind == res.archive.samples[i].kind);
  }
  write_text_file(dir / "bad.csv", "kind,source_idx,target_idx,conditioning,f1,f2,label\nX2Y,1,1,0.5,0,0,-1\n");
  CHECK_THROWS(read_archive_csv(dir / "bad.csv"));
}
