#include "disgan/classifier.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace disgan {

ClassifierNet::ClassifierNet(const ClassifierArch& arch, Rng& rng) : arch_(arch) {
  if (arch.input_dim == 0) throw std::invalid_argument("classifier input dimension must be >= 1");
  std::size_t m = arch.input_dim;
  if (!arch.linear) {
    if (arch.hidden == 0 || arch.penultimate == 0) throw std::invalid_argument("classifier widths must be >= 1");
    extractor_.emplace(std::vector<std::size_t>{arch.input_dim, arch.hidden, arch.penultimate},
                       std::vector<Activation>{Activation::tanh, Activation::tanh}, rng);
    m = arch.penultimate;
  }
  head_ = Mlp({m, 1}, {Activation::identity}, rng);
}

ClassifierNet ClassifierNet::linear(std::vector<double> w, double b) {
  ClassifierNet net;
  net.arch_.input_dim = w.size();
  net.arch_.linear = true;
  net.head_ = Mlp({w.size(), 1}, {Activation::identity});
  net.head_.params().get("l0.w").tensor = Tensor::column(w);
  net.head_.params().get("l0.b").tensor = Tensor::scalar(b);
  return net;
}

ClassifierNet ClassifierNet::from_parts(const ClassifierArch& arch, std::optional<Mlp> extractor, Mlp head) {
  ClassifierNet net;
  net.arch_ = arch;
  net.arch_.linear = !extractor.has_value();
  const std::size_t m = extractor ? extractor->out_dim() : arch.input_dim;
  if (extractor && extractor->in_dim() != arch.input_dim) throw ShapeError("extractor input width != input_dim");
  if (head.in_dim() != m || head.out_dim() != 1) throw ShapeError("classifier head must map features to one score");
  net.extractor_ = std::move(extractor);
  net.head_ = std::move(head);
  return net;
}

void ClassifierNet::check_input(std::size_t cols) const {
  if (cols != arch_.input_dim) {
    throw ShapeError("classifier expects dimension " + std::to_string(arch_.input_dim) + ", got " +
                     std::to_string(cols));
  }
}

Var ClassifierNet::features(Tape& tape, Var x) {
  check_input(x.value().cols());
  return extractor_ ? extractor_->forward(tape, x) : x;
}

Var ClassifierNet::score(Tape& tape, Var x) { return head_.forward(tape, features(tape, x)); }

Var ClassifierNet::features_const(Tape& tape, Var x) const {
  check_input(x.value().cols());
  return extractor_ ? extractor_->forward_const(tape, x) : x;
}

Var ClassifierNet::score_const(Tape& tape, Var x) const { return head_.forward_const(tape, features_const(tape, x)); }

std::vector<double> ClassifierNet::features(std::span<const double> z) const {
  Tape tape;
  Var x = tape.constant(Tensor({1, z.size()}, std::vector<double>(z.begin(), z.end())));
  return features_const(tape, x).value().values();
}

double ClassifierNet::score(std::span<const double> z) const {
  Tape tape;
  Var x = tape.constant(Tensor({1, z.size()}, std::vector<double>(z.begin(), z.end())));
  return score_const(tape, x).value().item();
}

std::vector<double> ClassifierNet::scores(const Tensor& batch) const {
  Tape tape;
  return score_const(tape, tape.constant(batch)).value().values();
}

std::vector<double> ClassifierNet::head_weights() const { return head_.params().get("l0.w").tensor.values(); }

double ClassifierNet::head_bias() const { return head_.params().get("l0.b").tensor.item(); }

std::vector<ParamSet*> ClassifierNet::param_sets() {
  std::vector<ParamSet*> out;
  if (extractor_) out.push_back(&extractor_->params());
  out.push_back(&head_.params());
  return out;
}

std::vector<const ParamSet*> ClassifierNet::param_sets() const {
  std::vector<const ParamSet*> out;
  if (extractor_) out.push_back(&extractor_->params());
  out.push_back(&head_.params());
  return out;
}

AuxiliaryClassifier::AuxiliaryClassifier(const ClassifierNet& net) : net_(net) {
  for (auto* ps : net_.param_sets()) ps->freeze_all();
  w_ = net_.head_weights();
  b_ = net_.head_bias();
  w_norm_ = std::sqrt(std::inner_product(w_.begin(), w_.end(), w_.begin(), 0.0));
}

AuxiliaryClassifier freeze(const ClassifierNet& net) { return AuxiliaryClassifier(net); }

Var hinge_loss(Var scores, Var labels) {
  if (scores.value().shape() != labels.value().shape()) {
    throw ShapeError("hinge_loss", scores.value().shape(), labels.value().shape());
  }
  return mean_all(relu(add_scalar(scale(mul(labels, scores), -1.0), 1.0)));
}

double hinge_loss(std::span<const double> scores, std::span<const double> labels) {
  if (scores.empty()) throw std::invalid_argument("hinge_loss: empty batch");
  if (scores.size() != labels.size()) throw std::invalid_argument("hinge_loss: scores and labels differ in length");
  double s = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) s += std::max(0.0, 1.0 - labels[i] * scores[i]);
  return s / static_cast<double>(scores.size());
}

void ClassifierOptimizer::step(ClassifierNet& net, double lr) {
  auto sets = net.param_sets();
  if (states.size() != sets.size()) states.assign(sets.size(), proto);
  for (std::size_t i = 0; i < sets.size(); ++i) adam_step(*sets[i], states[i], lr);
}

double hinge_step(ClassifierNet& net, ClassifierOptimizer& opt, const Tensor& features,
                  const std::vector<double>& labels, double lr, double l2) {
  if (features.rows() == 0 || labels.empty()) throw std::invalid_argument("hinge_step: empty batch");
  if (features.rows() != labels.size()) throw std::invalid_argument("hinge_step: feature/label count mismatch");
  Tape tape;
  Var loss = hinge_loss(net.score(tape, tape.constant(features)), tape.constant(Tensor::column(labels)));
  if (l2 > 0.0) {
    for (auto* ps : net.param_sets()) {
      for (auto& p : ps->items()) loss = add(loss, scale(mean_all(square(tape.param(p))), l2));
    }
  }
  const double value = loss.value().item();
  tape.backward(loss);
  opt.step(net, lr);
  return value;
}

namespace {

void require_both_labels(const Dataset& data) {
  if (data.count(Domain::X) == 0 || data.count(Domain::Y) == 0) {
    throw std::invalid_argument("classifier training needs samples from both domains");
  }
}

}  // namespace

ClassifierTrainResult train_classifier(const Dataset& data, const ClassifierArch& arch,
                                       const ClassifierTrainConfig& cfg, Rng& rng) {
  require_both_labels(data);
  ClassifierArch a = arch;
  a.input_dim = data.dim();
  ClassifierNet net(a, rng);
  return train_classifier(std::move(net), data, cfg, rng);
}

ClassifierTrainResult train_classifier(ClassifierNet init, const Dataset& data, const ClassifierTrainConfig& cfg,
                                       Rng& rng) {
  require_both_labels(data);
  if (cfg.batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
  ClassifierTrainResult result{std::move(init), {}};
  for (auto* ps : result.net.param_sets())
    for (auto& p : ps->items()) p.frozen = false;
  ClassifierOptimizer opt;
  opt.proto.beta1 = cfg.beta1;
  opt.proto.beta2 = cfg.beta2;
  opt.proto.base_lr = cfg.lr;

  const auto& samples = data.samples();
  std::vector<std::size_t> order(samples.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg.epochs, cfg.warm_epochs, cfg.lr);
    rng.shuffle(order);
    double total = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      std::vector<std::vector<double>> rows;
      std::vector<double> labels;
      for (std::size_t i = start; i < end; ++i) {
        rows.push_back(samples[order[i]].features);
        labels.push_back(samples[order[i]].label);
      }
      total += hinge_step(result.net, opt, to_matrix(rows), labels, lr, cfg.l2);
      ++batches;
    }
    result.epoch_loss.push_back(total / static_cast<double>(batches));
  }
  return result;
}

double training_accuracy(const ClassifierNet& net, const Dataset& data) {
  const auto s = net.scores(data.features());
  std::size_t correct = 0;
  for (std::size_t i = 0; i < s.size(); ++i) correct += (s[i] > 0.0 ? 1 : -1) == data[i].label;
  return static_cast<double>(correct) / static_cast<double>(s.size());
}

}  // namespace disgan
