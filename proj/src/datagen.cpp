#include "disgan/datagen.hpp"

#include <cmath>
#include <numbers>

namespace disgan {

namespace {

std::vector<double> sample_point(const DatasetSpec& spec, Domain d, std::size_t n, std::size_t i, Rng& rng) {
  std::vector<double> f(spec.dim, 0.0);
  const double side = d == Domain::Y ? 1.0 : -1.0;
  if (spec.generator == "gaussians") {
    f[0] = side * spec.separation / 2.0;
  } else if (spec.generator == "moons") {
    // evenly spaced along each arc, like the classic construction
    const double t = n > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    if (d == Domain::X) {
      f[0] = std::cos(t);
      f[1] = std::sin(t);
    } else {
      f[0] = 1.0 - std::cos(t);
      f[1] = 0.5 - std::sin(t);
    }
  } else {
    const std::size_t k = i % spec.clusters;
    f[0] = side * spec.separation / 2.0;
    f[1] = (static_cast<double>(k) - static_cast<double>(spec.clusters - 1) / 2.0) * spec.separation;
  }
  for (auto& v : f) v += spec.noise * rng.normal();
  return f;
}

}  // namespace

Dataset generate_dataset(const DatasetSpec& spec, Rng& rng) {
  spec.validate();
  Dataset data(spec.dim);
  for (std::size_t i = 0; i < spec.count_x; ++i) data.add(sample_point(spec, Domain::X, spec.count_x, i, rng), -1);
  for (std::size_t i = 0; i < spec.count_y; ++i) data.add(sample_point(spec, Domain::Y, spec.count_y, i, rng), 1);
  return data;
}

DatasetSplits split_dataset(const Dataset& data, const DatasetSpec& spec, Rng& rng) {
  DatasetSplits out{Dataset(data.dim()), Dataset(data.dim()), Dataset(data.dim())};
  for (auto d : {Domain::X, Domain::Y}) {
    auto rows = data.domain(d);
    rng.shuffle(rows);
    const auto n = static_cast<double>(rows.size());
    const auto n_train = static_cast<std::size_t>(std::llround(n * spec.split_train));
    const auto n_val = std::min(rows.size() - n_train, static_cast<std::size_t>(std::llround(n * spec.split_val)));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      Dataset& dst = i < n_train ? out.train : (i < n_train + n_val ? out.validation : out.test);
      dst.add(rows[i], label_of(d));
    }
  }
  return out;
}

DatasetSplits gen_data(const DatasetSpec& spec, std::uint64_t seed, const std::filesystem::path& out_dir) {
  spec.validate();
  Rng rng(seed);
  Rng gen_rng = rng.split();
  Rng split_rng = rng.split();
  auto splits = split_dataset(generate_dataset(spec, gen_rng), spec, split_rng);
  std::filesystem::create_directories(out_dir);
  write_dataset_csv(splits.train, out_dir / "train.csv");
  write_dataset_csv(splits.validation, out_dir / "val.csv");
  write_dataset_csv(splits.test, out_dir / "test.csv");
  return splits;
}

}  // namespace disgan
