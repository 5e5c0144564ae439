#include "disgan/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace disgan {

std::size_t wrap_index(std::size_t i, std::size_t size) {
  if (i < 1 || size < 1) throw std::invalid_argument("wrap_index needs i >= 1 and size >= 1");
  return (i - 1) % size + 1;
}

Dataset AugmentationArchive::as_dataset() const {
  Dataset d(dim);
  for (const auto& s : samples) d.add(s.features, s.label);
  return d;
}

void write_archive_csv(const AugmentationArchive& archive, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "kind,source_idx,target_idx,conditioning";
  for (std::size_t j = 0; j < archive.dim; ++j) out << ",f" << (j + 1);
  out << ",label\n";
  for (const auto& s : archive.samples) {
    out << to_string(s.kind) << ',' << s.source_index << ',' << s.target_index << ',' << format_double(s.conditioning);
    for (double v : s.features) out << ',' << format_double(v);
    out << ',' << s.label << '\n';
  }
}

AugmentationArchive read_archive_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open archive " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty archive file");
  const auto commas = static_cast<std::size_t>(std::count(line.begin(), line.end(), ','));
  if (line.rfind("kind,source_idx,target_idx,conditioning,", 0) != 0 || commas < 5) {
    throw std::runtime_error(path.string() + ":1: not an archive header");
  }
  AugmentationArchive archive;
  archive.dim = commas - 4;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const auto where = path.string() + ":" + std::to_string(line_no) + ": ";
    if (cells.size() != archive.dim + 5) throw std::runtime_error(where + "wrong column count");
    try {
      GeneratedSample s;
      s.kind = mapping_from_string(cells[0]);
      s.source_index = std::stoul(cells[1]);
      s.target_index = std::stoul(cells[2]);
      s.conditioning = std::stod(cells[3]);
      for (std::size_t j = 0; j < archive.dim; ++j) s.features.push_back(std::stod(cells[4 + j]));
      s.label = std::stoi(cells.back());
      if (s.label != target_label(s.kind)) throw std::runtime_error("label disagrees with kind");
      archive.samples.push_back(std::move(s));
    } catch (const std::exception& e) {
      throw std::runtime_error(where + e.what());
    }
  }
  return archive;
}

double equal_weight_hinge_update(ClassifierNet& c_prime, ClassifierOptimizer& opt, const Dataset& real_batch,
                                 const Dataset& generated_batch, double lr, double l2) {
  Dataset all(real_batch.dim());
  all.append(real_batch);
  all.append(generated_batch);
  if (all.empty()) throw std::invalid_argument("equal_weight_hinge_update: no samples");
  return hinge_step(c_prime, opt, all.features(), all.labels_real(), lr, l2);
}

void write_trace_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "step,epoch";
  for (auto m : kMappings) out << ",disc_" << to_string(m);
  for (auto m : kMappings) out << ",gen_" << to_string(m);
  out << ",ver_dis,hor_dis,inter_cyc,intra_cyc,ver_objective,hor_objective,cprime_loss\n";
  for (const auto& r : trace) {
    out << r.step << ',' << r.epoch;
    for (double v : r.disc) out << ',' << format_double(v);
    for (double v : r.terms.gen_gan) out << ',' << format_double(v);
    out << ',' << format_double(r.terms.ver_dis) << ',' << format_double(r.terms.hor_dis) << ','
        << format_double(r.terms.inter_cyc) << ',' << format_double(r.terms.intra_cyc) << ','
        << format_double(r.ver_objective) << ',' << format_double(r.hor_objective) << ','
        << format_double(r.cprime_loss) << '\n';
  }
}

namespace {

constexpr const char* kIndexNote =
    "x indices wrap by the size of domain X and y indices by the size of domain Y; "
    "the per-epoch loop visits every sample of the larger domain exactly once";

struct CPrimeUpdate {
  ClassifierNet* net = nullptr;
  ClassifierOptimizer* opt = nullptr;
};

DisganRun disgan_loop(const Dataset& train, std::shared_ptr<const AuxiliaryClassifier> aux, const RunConfig& cfg,
                      const PipelineHooks& hooks, Rng& gan_rng, Rng& loop_rng, CPrimeUpdate cprime) {
  const auto xs = train.domain(Domain::X);
  const auto ys = train.domain(Domain::Y);
  const std::size_t n = xs.size(), m = ys.size();
  if (n == 0 || m == 0) throw std::invalid_argument("both domains need at least one training sample");

  GanArch arch = cfg.gan_arch;
  arch.dim = train.dim();
  DisganRun run{GanBundle::create(arch, cfg.weights, cfg.geometry, aux, gan_rng), {}, {}, {}};
  if (hooks.on_bundle_created) hooks.on_bundle_created(run.bundle);
  auto opt = GanOptimizers::with(cfg.beta1, cfg.beta2, cfg.lr);

  auto& rep = run.report;
  rep.domain_x_size = n;
  rep.domain_y_size = m;
  rep.iterations_per_epoch = std::max(n, m);
  rep.epochs = cfg.epochs;
  rep.index_note = kIndexNote;
  run.archive.dim = train.dim();

  const std::size_t rows = cfg.batch_size;
  std::vector<std::size_t> y_order(m);
  std::size_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = lr_schedule(epoch, cfg.epochs, cfg.warm_epochs, cfg.lr);
    const double lr_c = lr_schedule(epoch, cfg.epochs, cfg.warm_epochs, cfg.clf_lr);
    std::iota(y_order.begin(), y_order.end(), 0);
    loop_rng.shuffle(y_order);
    run.archive.samples.clear();
    double cprime_total = 0.0;

    for (std::size_t i = 1; i <= rep.iterations_per_epoch; ++i) {
      // row 0 is the algorithm's quadruple; the remaining rows are extra
      // uniformly drawn quadruples that fill out the minibatch
      std::vector<std::size_t> xi{wrap_index(i, n) - 1}, xl{loop_rng.index(n)};
      std::vector<std::size_t> yj{y_order[wrap_index(i, m) - 1]}, yk{loop_rng.index(m)};
      for (std::size_t r = 1; r < rows; ++r) {
        xi.push_back(loop_rng.index(n));
        xl.push_back(loop_rng.index(n));
        yj.push_back(loop_rng.index(m));
        yk.push_back(loop_rng.index(m));
      }
      ClampCounter target_clamps;
      const QuadBatch batch = make_quad_batch(*aux, cfg.geometry, gather_rows(xs, xi), gather_rows(xs, xl),
                                              gather_rows(ys, yj), gather_rows(ys, yk), &target_clamps);
      StepReport sr = train_step(run.bundle, batch, opt, lr);

      rep.target_clamp_events += target_clamps.events;
      rep.distance_evaluations += target_clamps.evaluations;
      rep.generated_clamp_events += sr.clamp_events;
      rep.collapse_events += sr.collapsed;

      for (auto k : kMappings) {
        const bool from_x = k == Mapping::X2Y || k == Mapping::X2X;
        std::size_t target = 0;
        switch (k) {
          case Mapping::X2Y:
            target = yj[0];
            break;
          case Mapping::Y2X:
            target = xi[0];
            break;
          case Mapping::X2X:
            target = xl[0];
            break;
          case Mapping::Y2Y:
            target = yk[0];
            break;
        }
        run.archive.samples.push_back(GeneratedSample{k, (from_x ? xi[0] : yj[0]) + 1, target + 1,
                                                      forward_conditioning(k, batch)[0],
                                                      sr.fake[index(k)].row_values(0), target_label(k)});
      }

      TraceRow row{++step, epoch, sr.disc, sr.terms, sr.ver_objective, sr.hor_objective, 0.0};
      if (cprime.net) {
        Dataset real(train.dim()), generated(train.dim());
        for (std::size_t r = 0; r < rows; ++r) {
          real.add(batch.x_src.row_values(r), -1);
          real.add(batch.y_src.row_values(r), 1);
        }
        for (auto k : kMappings)
          for (std::size_t r = 0; r < rows; ++r) generated.add(sr.fake[index(k)].row_values(r), target_label(k));
        row.cprime_loss = equal_weight_hinge_update(*cprime.net, *cprime.opt, real, generated, lr_c, cfg.clf_l2);
        cprime_total += row.cprime_loss;
      }
      run.trace.push_back(row);
    }
    if (cprime.net) rep.cprime_epoch_loss.push_back(cprime_total / static_cast<double>(rep.iterations_per_epoch));
  }
  rep.total_iterations = step;
  return run;
}

}  // namespace

DisganRun train_disgan(const Dataset& train, std::shared_ptr<const AuxiliaryClassifier> aux, const RunConfig& cfg,
                       const PipelineHooks& hooks) {
  cfg.validate();
  if (!aux) throw std::invalid_argument("train_disgan needs an auxiliary classifier");
  Rng root(cfg.seed);
  root.split();  // classifier stream, unused here; keeps the GAN streams aligned with run_algorithm1
  Rng gan_rng = root.split();
  Rng loop_rng = root.split();
  return disgan_loop(train, std::move(aux), cfg, hooks, gan_rng, loop_rng, {});
}

Algorithm1Result run_algorithm1(const Dataset& train, const RunConfig& cfg, const PipelineHooks& hooks) {
  cfg.validate();
  if (train.count(Domain::X) == 0 || train.count(Domain::Y) == 0) {
    throw std::invalid_argument("both domains need at least one training sample");
  }
  Rng root(cfg.seed);
  Rng clf_rng = root.split();
  Rng gan_rng = root.split();
  Rng loop_rng = root.split();
  Rng cprime_rng = root.split();

  // Step 1
  const auto clf_cfg = cfg.classifier_train_config();
  auto trained = train_classifier(train, cfg.clf_arch, clf_cfg, clf_rng);

  // Step 2
  auto aux = std::make_shared<const AuxiliaryClassifier>(freeze(trained.net));
  if (hooks.on_frozen) hooks.on_frozen(*aux);

  // Step 3
  ClassifierArch arch = cfg.clf_arch;
  arch.input_dim = train.dim();
  ClassifierNet c_prime = cfg.warm_start_cprime ? trained.net : ClassifierNet(arch, cprime_rng);
  ClassifierOptimizer c_opt;
  c_opt.proto.beta1 = cfg.beta1;
  c_opt.proto.beta2 = cfg.beta2;
  c_opt.proto.base_lr = cfg.clf_lr;
  const bool per_iteration = cfg.cprime_mode == CPrimeMode::per_iteration;
  CPrimeUpdate update = per_iteration ? CPrimeUpdate{&c_prime, &c_opt} : CPrimeUpdate{};
  DisganRun run = disgan_loop(train, aux, cfg, hooks, gan_rng, loop_rng, update);

  if (!per_iteration) {
    Dataset augmented(train.dim());
    augmented.append(train);
    augmented.append(run.archive.as_dataset());
    auto post = train_classifier(std::move(c_prime), augmented, clf_cfg, cprime_rng);
    c_prime = std::move(post.net);
    run.report.cprime_epoch_loss = std::move(post.epoch_loss);
  }
  run.report.classifier_epoch_loss = trained.epoch_loss;

  return Algorithm1Result{std::move(trained.net), std::move(aux),          std::move(c_prime),
                          std::move(run.bundle),  std::move(run.archive),  std::move(run.trace),
                          std::move(run.report)};
}

}  // namespace disgan
