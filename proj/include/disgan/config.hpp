#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

#include "disgan/classifier.hpp"
#include "disgan/gan.hpp"
#include "disgan/geometry.hpp"

namespace disgan {

/// Raised for malformed or invariant-violating configuration; the message
/// names the offending key.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DatasetSpec {
  std::string generator = "subclusters";  // gaussians | moons | subclusters
  std::size_t count_x = 200;
  std::size_t count_y = 200;
  std::size_t dim = 2;
  double noise = 0.3;
  double separation = 4.0;
  std::size_t clusters = 2;  // per domain, subclusters only
  double split_train = 0.6;
  double split_val = 0.2;
  double split_test = 0.2;

  void validate() const;
};

enum class CPrimeMode { per_iteration, post_hoc };

struct RunConfig {
  std::uint64_t seed = 0;
  DatasetSpec data;

  // GAN training (Adam + constant-then-linear-decay schedule)
  int epochs = 50;
  int warm_epochs = 25;
  double lr = 1e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::size_t batch_size = 16;
  GanArch gan_arch;
  LossWeights weights;
  GeometryOptions geometry;

  // classifiers C and C'
  ClassifierArch clf_arch;
  int clf_epochs = 50;
  int clf_warm_epochs = 25;
  double clf_lr = 1e-2;
  double clf_l2 = 0.0;

  bool warm_start_cprime = false;
  CPrimeMode cprime_mode = CPrimeMode::per_iteration;

  ClassifierTrainConfig classifier_train_config() const;

  /// Applies one dotted key (e.g. "gan.lambda_ver_dis"). Throws ConfigError.
  void set(const std::string& key, const std::string& value);
  std::map<std::string, std::string> to_map() const;

  /// "key = value" lines, sorted by key, '#' comments allowed when parsing.
  std::string serialize() const;
  static RunConfig parse(const std::string& text);
  static RunConfig load(const std::filesystem::path& path);

  /// FNV-1a 64 of serialize(), as 16 hex digits.
  std::string hash() const;

  /// Rejects any invariant violation before compute starts.
  void validate() const;
};

}  // namespace disgan
