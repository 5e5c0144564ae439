#pragma once

#include <optional>
#include <span>
#include <vector>

#include "disgan/autodiff.hpp"
#include "disgan/dataset.hpp"
#include "disgan/mlp.hpp"
#include "disgan/optim.hpp"
#include "disgan/rng.hpp"

namespace disgan {

struct ClassifierArch {
  std::size_t input_dim = 2;
  /// Linear mode: the feature map is the identity, so m = input_dim.
  bool linear = false;
  std::size_t hidden = 16;
  std::size_t penultimate = 8;
};

/// Feature extractor (tanh MLP, or identity in linear mode) followed by a
/// single-output linear head. The head's weights and bias define the
/// hyperplane w . features(z) + b = 0.
class ClassifierNet {
 public:
  ClassifierNet() = default;
  ClassifierNet(const ClassifierArch& arch, Rng& rng);
  /// Linear net with the given hyperplane; mostly for geometry tests.
  static ClassifierNet linear(std::vector<double> w, double b);
  /// Assembles a net from already-built parts (used by the model reader).
  static ClassifierNet from_parts(const ClassifierArch& arch, std::optional<Mlp> extractor, Mlp head);

  const ClassifierArch& arch() const { return arch_; }
  std::size_t input_dim() const { return arch_.input_dim; }
  std::size_t feature_dim() const { return head_.in_dim(); }
  bool is_linear() const { return !extractor_.has_value(); }

  Var features(Tape& tape, Var x);
  Var score(Tape& tape, Var x);
  Var features_const(Tape& tape, Var x) const;
  Var score_const(Tape& tape, Var x) const;

  std::vector<double> features(std::span<const double> z) const;
  double score(std::span<const double> z) const;
  /// (B x D) -> B scores
  std::vector<double> scores(const Tensor& batch) const;

  std::vector<double> head_weights() const;
  double head_bias() const;

  const std::optional<Mlp>& extractor() const { return extractor_; }
  const Mlp& head() const { return head_; }
  std::vector<ParamSet*> param_sets();
  std::vector<const ParamSet*> param_sets() const;

 private:
  void check_input(std::size_t cols) const;

  ClassifierArch arch_;
  std::optional<Mlp> extractor_;
  Mlp head_;
};

/// Immutable, fully frozen copy of a trained classifier. Only const access is
/// exposed; every parameter carries the frozen flag so any tape built from it
/// treats the weights as constants.
class AuxiliaryClassifier {
 public:
  explicit AuxiliaryClassifier(const ClassifierNet& net);

  const ClassifierNet& net() const { return net_; }
  std::size_t input_dim() const { return net_.input_dim(); }
  std::size_t feature_dim() const { return net_.feature_dim(); }

  double score(std::span<const double> z) const { return net_.score(z); }
  std::vector<double> features(std::span<const double> z) const { return net_.features(z); }
  std::vector<double> scores(const Tensor& batch) const { return net_.scores(batch); }
  Var score(Tape& tape, Var x) const { return net_.score_const(tape, x); }
  Var features(Tape& tape, Var x) const { return net_.features_const(tape, x); }

  const std::vector<double>& w() const { return w_; }
  double b() const { return b_; }
  double w_norm() const { return w_norm_; }

 private:
  ClassifierNet net_;
  std::vector<double> w_;
  double b_ = 0.0;
  double w_norm_ = 0.0;
};

AuxiliaryClassifier freeze(const ClassifierNet& net);

/// Mean hinge loss over a batch. scores and labels are (B x 1).
Var hinge_loss(Var scores, Var labels);
double hinge_loss(std::span<const double> scores, std::span<const double> labels);

/// One Adam state per parameter set of a ClassifierNet.
struct ClassifierOptimizer {
  AdamState proto;
  std::vector<AdamState> states;

  void step(ClassifierNet& net, double lr);
};

struct ClassifierTrainConfig {
  int epochs = 50;
  int warm_epochs = 25;
  double lr = 1e-2;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::size_t batch_size = 16;
  double l2 = 0.0;
};

/// One hinge-loss Adam step on (features, labels). Returns the loss value
/// at the pre-update parameters.
double hinge_step(ClassifierNet& net, ClassifierOptimizer& opt, const Tensor& features, const std::vector<double>& labels,
                  double lr, double l2 = 0.0);

struct ClassifierTrainResult {
  ClassifierNet net;
  std::vector<double> epoch_loss;  // mean minibatch loss per epoch
};

/// Minibatch Adam on the hinge loss with the constant-then-linear-decay
/// schedule. Throws if the dataset lacks one of the two labels.
ClassifierTrainResult train_classifier(const Dataset& data, const ClassifierArch& arch,
                                       const ClassifierTrainConfig& cfg, Rng& rng);
/// Same, continuing from an existing net.
ClassifierTrainResult train_classifier(ClassifierNet init, const Dataset& data, const ClassifierTrainConfig& cfg,
                                       Rng& rng);

double training_accuracy(const ClassifierNet& net, const Dataset& data);

}  // namespace disgan
