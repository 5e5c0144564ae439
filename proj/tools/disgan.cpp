// disgan command-line tool: one subcommand per pipeline stage.
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "disgan/classifier.hpp"
#include "disgan/config.hpp"
#include "disgan/datagen.hpp"
#include "disgan/dataset.hpp"
#include "disgan/explain.hpp"
#include "disgan/model_io.hpp"
#include "disgan/pipeline.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace disgan;

namespace {

struct CommonOpts {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir = "run";
  std::optional<double> lambda_ver, lambda_hor;
  std::optional<bool> normalize_vertical, warm_start;
  std::optional<int> epochs;
  std::optional<std::size_t> batch_size;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--config", o.config_path, "config file (key = value lines)")->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "RNG seed");
  sub->add_option("--out-dir", o.out_dir, "output directory")->capture_default_str();
  sub->add_option("--lambda-ver-dis", o.lambda_ver, "weight of the vertical distance loss");
  sub->add_option("--lambda-hor-dis", o.lambda_hor, "weight of the horizontal distance loss");
  sub->add_option("--normalize-vertical", o.normalize_vertical, "divide d_v by ||w|| (true/false)");
  sub->add_option("--warm-start-cprime", o.warm_start, "initialise C' from C (true/false)");
  sub->add_option("--epochs", o.epochs, "epochs for the GAN and both classifiers; warm-up is half");
  sub->add_option("--batch-size", o.batch_size, "minibatch size");
}

// defaults < config file < flags
RunConfig effective_config(const CommonOpts& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : RunConfig::load(o.config_path);
  if (o.seed) cfg.seed = *o.seed;
  if (o.lambda_ver) cfg.weights.ver_dis = *o.lambda_ver;
  if (o.lambda_hor) cfg.weights.hor_dis = *o.lambda_hor;
  if (o.normalize_vertical) cfg.geometry.normalize_vertical = *o.normalize_vertical;
  if (o.warm_start) cfg.warm_start_cprime = *o.warm_start;
  if (o.epochs) {
    cfg.epochs = cfg.clf_epochs = *o.epochs;
    cfg.warm_epochs = cfg.clf_warm_epochs = *o.epochs / 2;
  }
  if (o.batch_size) cfg.batch_size = *o.batch_size;
  cfg.validate();
  return cfg;
}

json provenance(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["config_hash"] = cfg.hash();
  j["config"] = cfg.to_map();
  return j;
}

void write_json(const fs::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

fs::path or_default(const std::string& given, const fs::path& fallback) {
  return given.empty() ? fallback : fs::path(given);
}

std::vector<int> int_labels(const Dataset& d) {
  std::vector<int> out;
  for (const auto& s : d.samples()) out.push_back(s.label);
  return out;
}

json metrics_of(const ClassifierNet& net, const Dataset& d) {
  const auto scores = net.scores(d.features());
  const auto labels = int_labels(d);
  return {{"accuracy", accuracy(scores, labels)}, {"auc", auc(scores, labels)}, {"samples", d.size()}};
}

json report_json(const PipelineReport& r) {
  return {{"N", r.domain_x_size},
          {"M", r.domain_y_size},
          {"iterations_per_epoch", r.iterations_per_epoch},
          {"total_iterations", r.total_iterations},
          {"epochs", r.epochs},
          {"target_clamp_events", r.target_clamp_events},
          {"generated_clamp_events", r.generated_clamp_events},
          {"distance_evaluations", r.distance_evaluations},
          {"collapse_events", r.collapse_events},
          {"classifier_epoch_loss", r.classifier_epoch_loss},
          {"cprime_epoch_loss", r.cprime_epoch_loss},
          {"index_note", r.index_note}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distance-conditioned GAN data augmentation"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string train_csv, test_csv, data_csv, classifier_path, baseline_path, model_path, aux_path, bundle_path,
      archive_path;

  auto* gen = app.add_subcommand("gen-data", "write train/val/test CSVs from data.* settings");
  add_common(gen, o);

  auto* train_clf = app.add_subcommand("train-clf", "train the hinge-loss classifier C");
  add_common(train_clf, o);
  train_clf->add_option("--train", train_csv, "training CSV (default <out-dir>/train.csv)");

  auto* train_gan = app.add_subcommand("train-disgan", "train the four generators against a frozen classifier");
  add_common(train_gan, o);
  train_gan->add_option("--train", train_csv, "training CSV (default <out-dir>/train.csv)");
  train_gan->add_option("--classifier", classifier_path, "classifier to freeze (default <out-dir>/classifier.model)");

  auto* augment = app.add_subcommand("augment", "full run: C, frozen aux, DisGAN and C'");
  add_common(augment, o);
  augment->add_option("--train", train_csv, "training CSV (default <out-dir>/train.csv)");

  auto* eval = app.add_subcommand("eval", "compare the baseline C with C' on a test set");
  add_common(eval, o);
  eval->add_option("--test", test_csv, "test CSV (default <out-dir>/test.csv)");
  eval->add_option("--baseline", baseline_path, "baseline model (default <out-dir>/classifier.model)");
  eval->add_option("--model", model_path, "augmented model (default <out-dir>/cprime.model)");

  auto* explain = app.add_subcommand("explain", "class-difference maps and distance curves");
  add_common(explain, o);
  explain->add_option("--data", data_csv, "samples to explain (default <out-dir>/test.csv)");
  explain->add_option("--aux", aux_path, "frozen classifier (default <out-dir>/aux.model)");
  explain->add_option("--bundle", bundle_path, "generator bundle (default <out-dir>/bundle.model)");

  auto* plot = app.add_subcommand("plot", "scatter of real and generated samples with the hyperplane");
  add_common(plot, o);
  plot->add_option("--data", data_csv, "real samples (default <out-dir>/train.csv)");
  plot->add_option("--archive", archive_path, "generated samples (default <out-dir>/archive.csv)");
  plot->add_option("--aux", aux_path, "frozen classifier (default <out-dir>/aux.model)");

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = effective_config(o);
    const fs::path out(o.out_dir);
    fs::create_directories(out);
    json rep = provenance(cfg);

    if (*gen) {
      const auto splits = gen_data(cfg.data, cfg.seed, out);
      rep["rows"] = {{"train", splits.train.size()}, {"val", splits.validation.size()}, {"test", splits.test.size()}};
      write_json(out / "gen_data_report.json", rep);
    } else if (*train_clf) {
      const Dataset train = read_dataset_csv(or_default(train_csv, out / "train.csv"));
      Rng root(cfg.seed);
      Rng clf_rng = root.split();  // same stream run_algorithm1 uses for C
      auto res = train_classifier(train, cfg.clf_arch, cfg.classifier_train_config(), clf_rng);
      save_classifier(res.net, out / "classifier.model");
      rep["train_accuracy"] = training_accuracy(res.net, train);
      rep["epoch_loss"] = res.epoch_loss;
      write_json(out / "train_clf_report.json", rep);
    } else if (*train_gan) {
      const Dataset train = read_dataset_csv(or_default(train_csv, out / "train.csv"));
      const auto net = load_classifier(or_default(classifier_path, out / "classifier.model"));
      auto aux = std::make_shared<const AuxiliaryClassifier>(freeze(net));
      auto run = train_disgan(train, aux, cfg);
      save_classifier(aux->net(), out / "aux.model");
      save_bundle(run.bundle, out / "bundle.model");
      write_archive_csv(run.archive, out / "archive.csv");
      write_trace_csv(run.trace, out / "losses.csv");
      rep["pipeline"] = report_json(run.report);
      write_json(out / "train_disgan_report.json", rep);
    } else if (*augment) {
      const Dataset train = read_dataset_csv(or_default(train_csv, out / "train.csv"));
      auto res = run_algorithm1(train, cfg);
      save_classifier(res.classifier, out / "classifier.model");
      save_classifier(res.aux->net(), out / "aux.model");
      save_classifier(res.c_prime, out / "cprime.model");
      save_bundle(res.bundle, out / "bundle.model");
      write_archive_csv(res.archive, out / "archive.csv");
      write_trace_csv(res.trace, out / "losses.csv");
      rep["pipeline"] = report_json(res.report);
      rep["archive_size"] = res.archive.size();
      rep["train_accuracy"] = {{"classifier", training_accuracy(res.classifier, train)},
                               {"cprime", training_accuracy(res.c_prime, train)}};
      write_json(out / "report.json", rep);
    } else if (*eval) {
      const Dataset test = read_dataset_csv(or_default(test_csv, out / "test.csv"));
      const auto base = load_classifier(or_default(baseline_path, out / "classifier.model"));
      const auto model = load_classifier(or_default(model_path, out / "cprime.model"));
      rep["baseline"] = metrics_of(base, test);
      rep["augmented"] = metrics_of(model, test);
      write_json(out / "eval_report.json", rep);
      std::string csv = "model,accuracy,auc\n";
      for (const char* k : {"baseline", "augmented"}) {
        csv += std::string(k) + "," + format_double(rep[k]["accuracy"].get<double>()) + "," +
               format_double(rep[k]["auc"].get<double>()) + "\n";
      }
      write_text_file(out / "eval.csv", csv);
    } else if (*explain) {
      const Dataset data = read_dataset_csv(or_default(data_csv, out / "test.csv"));
      auto aux = std::make_shared<const AuxiliaryClassifier>(
          freeze(load_classifier(or_default(aux_path, out / "aux.model"))));
      const auto bundle = load_bundle(or_default(bundle_path, out / "bundle.model"), aux);
      write_cdm_csv(cdm_all(bundle, data), out / "cdm.csv");
      const auto curves = distance_curve_report(bundle, data, cfg.seed);
      write_curve_csv(curves, out / "curves.csv");
      auto r = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
      rep["r_vertical"] = r(curves.r_vertical);
      rep["r_horizontal"] = r(curves.r_horizontal);
      rep["cdm_rows"] = data.size();
      write_json(out / "explain_report.json", rep);
    } else if (*plot) {
      const Dataset data = read_dataset_csv(or_default(data_csv, out / "train.csv"));
      const auto archive = read_archive_csv(or_default(archive_path, out / "archive.csv"));
      const auto aux = freeze(load_classifier(or_default(aux_path, out / "aux.model")));
      const auto res = export_scatter(data, archive, aux, out / "scatter");
      if (!res.notice.empty()) std::cerr << res.notice << '\n';
      rep["svg_written"] = res.svg_written;
      rep["csv_rows"] = res.csv_rows;
      rep["hyperplane_segments"] = res.hyperplane.size();
      if (!res.notice.empty()) rep["notice"] = res.notice;
      write_json(out / "plot_report.json", rep);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
