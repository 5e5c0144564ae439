#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "disgan/classifier.hpp"
#include "disgan/config.hpp"
#include "disgan/dataset.hpp"
#include "disgan/gan.hpp"

namespace disgan {

/// Cyclic 1-based wrap: ((i - 1) mod size) + 1.
std::size_t wrap_index(std::size_t i, std::size_t size);

struct GeneratedSample {
  Mapping kind;
  std::size_t source_index;  // 1-based, within the source's domain
  std::size_t target_index;  // 1-based, within the target sample's domain
  double conditioning;
  std::vector<double> features;
  int label;
};

/// Generated samples with provenance. Labels follow the domain a mapping
/// writes into: X2Y and Y2Y carry +1, Y2X and X2X carry -1.
struct AugmentationArchive {
  std::size_t dim = 0;
  std::vector<GeneratedSample> samples;

  std::size_t size() const { return samples.size(); }
  Dataset as_dataset() const;
};

/// CSV columns: kind,source_idx,target_idx,conditioning,f1..fD,label
void write_archive_csv(const AugmentationArchive& archive, const std::filesystem::path& path);
AugmentationArchive read_archive_csv(const std::filesystem::path& path);

/// Single hinge-loss Adam step over real and generated samples concatenated,
/// each sample weighted equally. Returns the pre-update loss.
double equal_weight_hinge_update(ClassifierNet& c_prime, ClassifierOptimizer& opt, const Dataset& real_batch,
                                 const Dataset& generated_batch, double lr, double l2 = 0.0);

struct TraceRow {
  std::size_t step = 0;
  int epoch = 0;
  std::array<double, 4> disc{};
  ObjectiveTerms terms;
  double ver_objective = 0.0;
  double hor_objective = 0.0;
  double cprime_loss = 0.0;
};

void write_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path);

struct PipelineReport {
  std::size_t domain_x_size = 0;  // N
  std::size_t domain_y_size = 0;  // M
  std::size_t iterations_per_epoch = 0;
  std::size_t total_iterations = 0;
  int epochs = 0;
  std::size_t target_clamp_events = 0;     // negative radicands when measuring d_h targets
  std::size_t generated_clamp_events = 0;  // ... and when measuring d_h on generated samples
  std::size_t distance_evaluations = 0;
  std::size_t collapse_events = 0;  // generator batches with zero spread
  std::vector<double> classifier_epoch_loss;
  std::vector<double> cprime_epoch_loss;
  std::string index_note;
};

struct PipelineHooks {
  /// Called once after the auxiliary classifier has been frozen.
  std::function<void(const AuxiliaryClassifier&)> on_frozen;
  /// Called once after the GAN bundle has been initialised; may replace nets.
  std::function<void(GanBundle&)> on_bundle_created;
};

struct DisganRun {
  GanBundle bundle;
  AugmentationArchive archive;  // samples generated during the final epoch
  std::vector<TraceRow> trace;
  PipelineReport report;
};

/// Step 3 without the classifier update: joint training of the four
/// generators and discriminators against a frozen auxiliary classifier.
DisganRun train_disgan(const Dataset& train, std::shared_ptr<const AuxiliaryClassifier> aux, const RunConfig& cfg,
                       const PipelineHooks& hooks = {});

struct Algorithm1Result {
  ClassifierNet classifier;  // C, trained on the real data only
  std::shared_ptr<const AuxiliaryClassifier> aux;
  ClassifierNet c_prime;
  GanBundle bundle;
  AugmentationArchive archive;
  std::vector<TraceRow> trace;
  PipelineReport report;
};

/// The full augmentation algorithm:
///   1. train C with the hinge loss on the real samples
///   2. freeze C into the auxiliary classifier
///   3. for every epoch, loop i = 1 .. max(N, M): draw x_i, x_l, y_j, y_k,
///      measure their distances, update discriminators then generators, and
///      update C' on the sources plus all generated samples.
/// With cprime.mode = post_hoc the per-iteration C' updates are replaced by
/// training C' after the loop on real + archived samples.
Algorithm1Result run_algorithm1(const Dataset& train, const RunConfig& cfg, const PipelineHooks& hooks = {});

}  // namespace disgan
