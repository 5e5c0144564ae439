#pragma once

#include <filesystem>

#include "disgan/config.hpp"
#include "disgan/dataset.hpp"
#include "disgan/rng.hpp"

namespace disgan {

/// Synthetic two-domain data:
///   gaussians    one isotropic blob per domain, centers +-separation/2 on axis 1
///   moons        interleaving half circles in the first two axes
///   subclusters  `clusters` blobs per domain, stacked along axis 2, so
///                within-domain horizontal distances are multi-modal
/// Extra dimensions beyond those carry pure noise.
Dataset generate_dataset(const DatasetSpec& spec, Rng& rng);

struct DatasetSplits {
  Dataset train, validation, test;
};

/// Per-domain split: round(n * split_train) train rows, round(n * split_val)
/// validation rows, the rest test. Rows are shuffled before splitting.
DatasetSplits split_dataset(const Dataset& data, const DatasetSpec& spec, Rng& rng);

/// Writes train.csv, val.csv and test.csv under out_dir.
DatasetSplits gen_data(const DatasetSpec& spec, std::uint64_t seed, const std::filesystem::path& out_dir);

}  // namespace disgan
