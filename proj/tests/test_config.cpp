#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "disgan/config.hpp"
#include "disgan/datagen.hpp"
#include "disgan/model_io.hpp"
#include "support.hpp"

using namespace disgan;
using namespace disgan::testing;

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK(c.beta1 == 0.5);
  CHECK(c.beta2 == 0.999);
  CHECK(c.lr == 1e-4);
  CHECK(c.epochs == 50);
  CHECK(c.warm_epochs == 25);
  CHECK(c.weights.ver_dis == 0.1);
  CHECK(c.weights.hor_dis == 0.001);
  CHECK(c.weights.inter_cyc == 10.0);
  CHECK(c.weights.intra_cyc == 10.0);
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("config text round trip") {
  RunConfig c;
  c.seed = 123;
  c.set("gan.lambda_ver_dis", "0.05");
  c.set("geometry.normalize_vertical", "true");
  c.set("data.generator", "moons");
  c.set("cprime.mode", "post_hoc");
  c.set("train.lr", "0.00037");
  const std::string text = c.serialize();
  const RunConfig back = RunConfig::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.hash() == c.hash());
  CHECK(back.weights.ver_dis == 0.05);
  CHECK(back.geometry.normalize_vertical);
  CHECK(back.cprime_mode == CPrimeMode::post_hoc);
  CHECK(back.lr == 0.00037);
  CHECK(c.hash().size() == 16);
  CHECK(RunConfig{}.hash() != c.hash());
}

TEST_CASE("config parsing: comments, blanks and errors name the key") {
  const auto c = RunConfig::parse("# a comment\n\nseed = 7\n  gan.lambda_hor_dis=0.005  \n");
  CHECK(c.seed == 7);
  CHECK(c.weights.hor_dis == 0.005);

  auto message = [](const std::string& text) {
    try {
      RunConfig::parse(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message("gan.lambda_nope = 1\n").find("gan.lambda_nope") != std::string::npos);
  CHECK(message("train.epochs = many\n").find("train.epochs") != std::string::npos);
  CHECK(message("seed 7\n").find("line 1") != std::string::npos);
  CHECK(message("geometry.normalize_vertical = maybe\n").find("geometry.normalize_vertical") != std::string::npos);
}

TEST_CASE("invariant violations are rejected") {
  auto rejects = [](auto&& mutate) {
    RunConfig c;
    mutate(c);
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  };
  rejects([](RunConfig& c) { c.weights.ver_dis = 0.5; });
  rejects([](RunConfig& c) { c.weights.hor_dis = 0.05; });
  rejects([](RunConfig& c) {
    c.weights.ver_dis = 0.01;
    c.weights.hor_dis = 0.01 + 1e-9;
  });
  rejects([](RunConfig& c) { c.warm_epochs = 60; });
  rejects([](RunConfig& c) { c.batch_size = 0; });
  rejects([](RunConfig& c) { c.data.split_train = 0.9; });
  rejects([](RunConfig& c) { c.data.clusters = 1; });
  rejects([](RunConfig& c) { c.data.generator = "spirals"; });
  rejects([](RunConfig& c) { c.data.count_y = 0; });
}

TEST_CASE("gen_data: counts, disjoint splits and byte-identical reruns") {
  DatasetSpec spec;
  spec.generator = "gaussians";
  spec.count_x = spec.count_y = 100;
  const auto a = scratch_dir("gen_a"), b = scratch_dir("gen_b");
  const auto s = gen_data(spec, 5, a);
  gen_data(spec, 5, b);
  CHECK(s.train.size() == 120);
  CHECK(s.validation.size() == 40);
  CHECK(s.test.size() == 40);
  CHECK(s.train.count(Domain::X) == 60);
  CHECK(s.test.count(Domain::Y) == 20);
  for (const char* f : {"train.csv", "val.csv", "test.csv"}) CHECK(read_text_file(a / f) == read_text_file(b / f));
  CHECK(read_dataset_csv(a / "val.csv").size() == 40);

  std::vector<std::vector<double>> all;
  for (const auto* d : {&s.train, &s.validation, &s.test})
    for (const auto& x : d->samples()) all.push_back(x.features);
  std::sort(all.begin(), all.end());
  CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());

  const auto c = scratch_dir("gen_c");
  gen_data(spec, 6, c);
  CHECK(read_text_file(a / "train.csv") != read_text_file(c / "train.csv"));
}

TEST_CASE("subclusters: within-domain distances are multi-modal") {
  DatasetSpec spec;  // subclusters by default
  spec.count_x = spec.count_y = 60;
  Rng rng(8);
  const auto data = generate_dataset(spec, rng);
  for (auto dom : {Domain::X, Domain::Y}) {
    const auto rows = data.domain(dom);
    std::vector<double> dist;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = i + 1; j < rows.size(); ++j) dist.push_back(std::hypot(rows[i][0] - rows[j][0], rows[i][1] - rows[j][1]));
    // histogram with 0.25-wide bins; a mode is a run of non-empty bins
    // holding at least 10% of the pairs
    const double width = 0.25;
    const auto top = static_cast<std::size_t>(*std::max_element(dist.begin(), dist.end()) / width) + 1;
    std::vector<std::size_t> hist(top, 0);
    for (double d : dist) ++hist[static_cast<std::size_t>(d / width)];
    std::size_t modes = 0, run = 0;
    for (std::size_t k = 0; k <= top; ++k) {
      if (k < top && hist[k] > 0) {
        run += hist[k];
      } else {
        modes += run >= dist.size() / 10;
        run = 0;
      }
    }
    CHECK(modes >= 2);
  }
}

TEST_CASE("dataset CSV errors carry the line number") {
  const auto dir = scratch_dir("csv_err");
  write_text_file(dir / "bad.csv", "f1,f2,label\n0,1,1\n0,x,-1\n");
  try {
    read_dataset_csv(dir / "bad.csv");
    FAIL("expected an error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find(":3") != std::string::npos);
  }
  write_text_file(dir / "lab.csv", "f1,label\n0,2\n");
  CHECK_THROWS(read_dataset_csv(dir / "lab.csv"));
  CHECK_THROWS(read_dataset_csv(dir / "missing.csv"));
}

TEST_CASE("format_double reads back exactly") {
  Rng rng(9);
  for (int i = 0; i < 1000; ++i) {
    const double v = rng.normal() * std::pow(10.0, static_cast<double>(rng.index(20)) - 10.0);
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("model files reproduce every score bit for bit") {
  Rng rng(10);
  for (bool linear : {false, true}) {
    const ClassifierNet net(ClassifierArch{3, linear, 5, 4}, rng);
    const auto dir = scratch_dir("model_rt");
    save_classifier(net, dir / "c.model");
    const auto back = load_classifier(dir / "c.model");
    CHECK(serialize_classifier(back) == serialize_classifier(net));
    CHECK(back.is_linear() == linear);
    for (int t = 0; t < 20; ++t) {
      const auto z = random_point(rng, 3);
      CHECK(back.score(z) == net.score(z));
    }
  }

  auto aux = tiny_aux(rng);
  auto bundle = tiny_bundle(rng, aux, 4, GeometryOptions{true});
  const auto dir = scratch_dir("bundle_rt");
  save_bundle(bundle, dir / "b.model");
  const auto back = load_bundle(dir / "b.model", aux);
  CHECK(back.geometry.normalize_vertical);
  CHECK(back.weights.ver_dis == bundle.weights.ver_dis);
  const Tensor z = random_matrix(rng, 3, 2);
  for (auto m : kMappings) CHECK(back.generate(m, z, {0.1, -0.2, 0.3}).values() == bundle.generate(m, z, {0.1, -0.2, 0.3}).values());
}

TEST_CASE("corrupt or foreign model files are rejected") {
  Rng rng(11);
  const std::string good = serialize_classifier(tiny_classifier(rng));
  CHECK_THROWS(parse_classifier("not a model\n"));
  CHECK_THROWS(parse_classifier("disgan-model 99\n" + good.substr(good.find('\n') + 1)));
  CHECK_THROWS(parse_classifier(good.substr(0, good.size() / 2)));
  auto aux = tiny_aux(rng);
  CHECK_THROWS(parse_bundle(good, aux));
}
