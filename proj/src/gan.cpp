#include "disgan/gan.hpp"

#include <cmath>
#include <sstream>

namespace disgan {

std::string to_string(Mapping m) {
  switch (m) {
    case Mapping::X2Y:
      return "X2Y";
    case Mapping::Y2X:
      return "Y2X";
    case Mapping::X2X:
      return "X2X";
    case Mapping::Y2Y:
      return "Y2Y";
  }
  return "?";
}

Mapping mapping_from_string(const std::string& s) {
  for (auto m : kMappings)
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown mapping kind: " + s);
}

int target_label(Mapping m) { return (m == Mapping::X2Y || m == Mapping::Y2Y) ? 1 : -1; }

void LossWeights::validate() const {
  auto fail = [](const std::string& msg) { throw std::invalid_argument("loss weights: " + msg); };
  if (!(ver_dis >= 0.01 && ver_dis <= 0.1)) fail("lambda_ver_dis must lie in [0.01, 0.1]");
  if (!(hor_dis >= 0.001 && hor_dis <= 0.01)) fail("lambda_hor_dis must lie in [0.001, 0.01]");
  if (hor_dis > ver_dis) fail("lambda_hor_dis must not exceed lambda_ver_dis");
  if (!(inter_cyc > 0.0) || !(intra_cyc > 0.0)) fail("cycle weights must be positive");
}

Mlp make_generator(const GanArch& arch, Rng& rng) {
  return Mlp({arch.dim + 1, arch.gen_hidden, arch.gen_hidden, arch.dim},
             {Activation::tanh, Activation::tanh, Activation::identity}, rng);
}

Mlp make_discriminator(const GanArch& arch, Rng& rng) {
  return Mlp({arch.dim, arch.disc_hidden, 1}, {Activation::tanh, Activation::identity}, rng);
}

GanBundle GanBundle::create(const GanArch& arch, const LossWeights& weights, const GeometryOptions& geometry,
                            std::shared_ptr<const AuxiliaryClassifier> aux, Rng& rng) {
  if (!aux) throw std::invalid_argument("GanBundle needs an auxiliary classifier");
  if (aux->input_dim() != arch.dim) throw ShapeError("auxiliary classifier dimension differs from GAN dimension");
  GanBundle b;
  for (auto m : kMappings) b.generators[index(m)] = make_generator(arch, rng);
  for (auto m : kMappings) b.discriminators[index(m)] = make_discriminator(arch, rng);
  b.weights = weights;
  b.geometry = geometry;
  b.aux = std::move(aux);
  return b;
}

Tensor GanBundle::generate(Mapping m, const Tensor& z, const std::vector<double>& conditioning) const {
  if (conditioning.size() != z.rows()) throw ShapeError("one conditioning scalar per row is required");
  Tape tape;
  Var in = concat_last_axis(tape.constant(z), tape.constant(Tensor::column(conditioning)));
  return generator(m).forward_const(tape, in).value();
}

QuadBatch make_quad_batch(const AuxiliaryClassifier& aux, const GeometryOptions& geometry, Tensor x_src,
                          Tensor x_pair, Tensor y_src, Tensor y_pair, ClampCounter* counter) {
  const auto& s = x_src.shape();
  if (x_pair.shape() != s || y_src.shape() != s || y_pair.shape() != s) {
    throw ShapeError("quad batch parts must share one shape, got " + shape_string(s) + ", " +
                     shape_string(x_pair.shape()) + ", " + shape_string(y_src.shape()) + ", " +
                     shape_string(y_pair.shape()));
  }
  QuadBatch b;
  b.dv_x = vertical_distances(aux, x_src, geometry);
  b.dv_y = vertical_distances(aux, y_src, geometry);
  b.dh_x = horizontal_distances(aux, x_src, x_pair, geometry, counter);
  b.dh_y = horizontal_distances(aux, y_src, y_pair, geometry, counter);
  b.x_src = std::move(x_src);
  b.x_pair = std::move(x_pair);
  b.y_src = std::move(y_src);
  b.y_pair = std::move(y_pair);
  return b;
}

namespace {

Tensor scaled(const Tensor& t, double s) {
  Tensor out = t;
  for (auto& v : out.values()) v *= s;
  return out;
}

Mapping inverse_mapping(Mapping m) {
  switch (m) {
    case Mapping::X2Y:
      return Mapping::Y2X;
    case Mapping::Y2X:
      return Mapping::X2Y;
    default:
      return m;
  }
}

const Tensor& source_of(Mapping m, const QuadBatch& b) {
  return (m == Mapping::X2Y || m == Mapping::X2X) ? b.x_src : b.y_src;
}

const Tensor& real_for(Mapping m, const QuadBatch& b) {
  switch (m) {
    case Mapping::X2Y:
      return b.y_src;
    case Mapping::Y2X:
      return b.x_src;
    case Mapping::X2X:
      return b.x_pair;
    case Mapping::Y2Y:
      return b.y_pair;
  }
  return b.x_src;
}

template <typename Apply>
GeneratorPass generator_pass(Tape& tape, const QuadBatch& batch, Apply apply) {
  GeneratorPass pass;
  for (auto m : kMappings) {
    Var src = tape.constant(source_of(m, batch));
    Var fwd = tape.constant(forward_conditioning(m, batch));
    pass.fake[index(m)] = apply(m, concat_last_axis(src, fwd));
  }
  for (auto m : kMappings) {
    Var back = tape.constant(inverse_conditioning(m, batch));
    pass.reconstructed[index(m)] = apply(inverse_mapping(m), concat_last_axis(pass.fake[index(m)], back));
  }
  return pass;
}

GeneratorPass run_generators_const(Tape& tape, const GanBundle& bundle, const QuadBatch& batch) {
  return generator_pass(tape, batch, [&](Mapping m, Var in) { return bundle.generator(m).forward_const(tape, in); });
}

Var l1_reconstruction(Tape& tape, const Tensor& source, Var reconstructed) {
  return mean_all(sum_last_axis(abs_elem(sub(tape.constant(source), reconstructed))));
}

}  // namespace

Tensor forward_conditioning(Mapping m, const QuadBatch& b) {
  switch (m) {
    case Mapping::X2Y:
      return b.dv_y;  // G_X2Y(x, +d_v(y))
    case Mapping::Y2X:
      return scaled(b.dv_x, -1.0);  // G_Y2X(y, -d_v(x))
    case Mapping::X2X:
      return scaled(b.dh_x, -1.0);  // G_X2X(x1, -d_h(x1, x2))
    case Mapping::Y2Y:
      return scaled(b.dh_y, -1.0);
  }
  return b.dv_y;
}

Tensor inverse_conditioning(Mapping m, const QuadBatch& b) {
  switch (m) {
    case Mapping::X2Y:
      return scaled(b.dv_x, -1.0);  // back to X with the source's own -d_v(x1)
    case Mapping::Y2X:
      return b.dv_y;  // back to Y with +d_v(y1)
    case Mapping::X2X:
      return b.dh_x;
    case Mapping::Y2Y:
      return b.dh_y;
  }
  return b.dv_x;
}

GeneratorPass run_generators(Tape& tape, GanBundle& bundle, const QuadBatch& batch, bool trainable) {
  if (!trainable) return run_generators_const(tape, bundle, batch);
  return generator_pass(tape, batch, [&](Mapping m, Var in) { return bundle.generator(m).forward(tape, in); });
}

Var lsgan_disc_loss(Tape& tape, Mlp& disc, Var real, Var fake) {
  Var real_term = mean_all(square(add_scalar(disc.forward(tape, real), -1.0)));
  Var fake_term = mean_all(square(disc.forward(tape, fake)));
  return add(real_term, fake_term);
}

Var lsgan_gen_loss(Tape& tape, const Mlp& disc, Var fake) {
  return mean_all(square(add_scalar(disc.forward_const(tape, fake), -1.0)));
}

LsganLosses lsgan_loss(const Mlp& disc, const Tensor& real, const Tensor& fake) {
  if (real.size() == 0 || fake.size() == 0) throw std::invalid_argument("lsgan_loss: empty batch");
  Tape tape;
  Mlp copy = disc;
  Var r = tape.constant(real);
  Var f = tape.constant(fake);
  const double d = lsgan_disc_loss(tape, copy, r, f).value().item();
  const double g = lsgan_gen_loss(tape, disc, f).value().item();
  return {d, g};
}

Var ver_dis_loss(Tape& tape, const GanBundle& bundle, const QuadBatch& batch, const GeneratorPass& pass) {
  const auto& aux = *bundle.aux;
  // | |d_v(target)| - |d_v(G(source, +-d_v(target)))| |^2, both directions
  Var target_y = abs_elem(tape.constant(batch.dv_y));
  Var got_y = abs_elem(vertical_distance(aux, tape, pass.fake[index(Mapping::X2Y)], bundle.geometry));
  Var target_x = abs_elem(tape.constant(batch.dv_x));
  Var got_x = abs_elem(vertical_distance(aux, tape, pass.fake[index(Mapping::Y2X)], bundle.geometry));
  return add(mean_all(square(sub(target_y, got_y))), mean_all(square(sub(target_x, got_x))));
}

Var hor_dis_loss(Tape& tape, const GanBundle& bundle, const QuadBatch& batch, const GeneratorPass& pass,
                 ClampCounter* counter) {
  const auto& aux = *bundle.aux;
  Var got_x = horizontal_distance(aux, tape, tape.constant(batch.x_src), pass.fake[index(Mapping::X2X)],
                                  bundle.geometry, counter);
  Var got_y = horizontal_distance(aux, tape, tape.constant(batch.y_src), pass.fake[index(Mapping::Y2Y)],
                                  bundle.geometry, counter);
  return add(mean_all(square(sub(tape.constant(batch.dh_x), got_x))),
             mean_all(square(sub(tape.constant(batch.dh_y), got_y))));
}

Var inter_cycle_loss(Tape& tape, const QuadBatch& batch, const GeneratorPass& pass) {
  return add(l1_reconstruction(tape, batch.x_src, pass.reconstructed[index(Mapping::X2Y)]),
             l1_reconstruction(tape, batch.y_src, pass.reconstructed[index(Mapping::Y2X)]));
}

Var intra_cycle_loss(Tape& tape, const QuadBatch& batch, const GeneratorPass& pass) {
  return add(l1_reconstruction(tape, batch.x_src, pass.reconstructed[index(Mapping::X2X)]),
             l1_reconstruction(tape, batch.y_src, pass.reconstructed[index(Mapping::Y2Y)]));
}

double verdisgan_objective(const ObjectiveTerms& t, const LossWeights& w) {
  return t.gen_gan[index(Mapping::X2Y)] + t.gen_gan[index(Mapping::Y2X)] + w.ver_dis * t.ver_dis +
         w.inter_cyc * t.inter_cyc;
}

double hordisgan_objective(const ObjectiveTerms& t, const LossWeights& w) {
  return t.gen_gan[index(Mapping::X2X)] + t.gen_gan[index(Mapping::Y2Y)] + w.hor_dis * t.hor_dis +
         w.intra_cyc * t.intra_cyc;
}

double ver_dis_loss(const GanBundle& bundle, const QuadBatch& batch) {
  Tape tape;
  auto pass = run_generators_const(tape, bundle, batch);
  return ver_dis_loss(tape, bundle, batch, pass).value().item();
}

double hor_dis_loss(const GanBundle& bundle, const QuadBatch& batch) {
  Tape tape;
  auto pass = run_generators_const(tape, bundle, batch);
  return hor_dis_loss(tape, bundle, batch, pass).value().item();
}

CycleLosses cycle_losses(const GanBundle& bundle, const QuadBatch& batch) {
  Tape tape;
  auto pass = run_generators_const(tape, bundle, batch);
  return {inter_cycle_loss(tape, batch, pass).value().item(), intra_cycle_loss(tape, batch, pass).value().item()};
}

ObjectiveTerms objective_terms(const GanBundle& bundle, const QuadBatch& batch) {
  Tape tape;
  auto pass = run_generators_const(tape, bundle, batch);
  ObjectiveTerms t;
  for (auto m : kMappings)
    t.gen_gan[index(m)] = lsgan_gen_loss(tape, bundle.discriminator(m), pass.fake[index(m)]).value().item();
  t.ver_dis = ver_dis_loss(tape, bundle, batch, pass).value().item();
  t.hor_dis = hor_dis_loss(tape, bundle, batch, pass).value().item();
  t.inter_cyc = inter_cycle_loss(tape, batch, pass).value().item();
  t.intra_cyc = intra_cycle_loss(tape, batch, pass).value().item();
  return t;
}

GanOptimizers GanOptimizers::with(double beta1, double beta2, double base_lr) {
  GanOptimizers o;
  for (auto* group : {&o.gen, &o.disc}) {
    for (auto& s : *group) {
      s.beta1 = beta1;
      s.beta2 = beta2;
      s.base_lr = base_lr;
    }
  }
  return o;
}

namespace {

bool collapsed(const Tensor& batch) {
  const std::size_t rows = batch.rows(), cols = batch.cols();
  if (rows < 2) return false;
  for (std::size_t j = 0; j < cols; ++j) {
    double lo = batch[j], hi = batch[j];
    for (std::size_t r = 1; r < rows; ++r) {
      lo = std::min(lo, batch[r * cols + j]);
      hi = std::max(hi, batch[r * cols + j]);
    }
    if (hi - lo > 1e-12) return false;
  }
  return true;
}

[[noreturn]] void non_finite(const char* stage, const StepReport& r) {
  std::ostringstream os;
  os << "non-finite loss during " << stage << " update; snapshot: disc=[" << r.disc[0] << ", " << r.disc[1] << ", "
     << r.disc[2] << ", " << r.disc[3] << "] gen_gan=[" << r.terms.gen_gan[0] << ", " << r.terms.gen_gan[1] << ", "
     << r.terms.gen_gan[2] << ", " << r.terms.gen_gan[3] << "] ver_dis=" << r.terms.ver_dis
     << " hor_dis=" << r.terms.hor_dis << " inter_cyc=" << r.terms.inter_cyc << " intra_cyc=" << r.terms.intra_cyc;
  throw NonFiniteLoss(os.str());
}

}  // namespace

StepReport train_step(GanBundle& bundle, const QuadBatch& batch, GanOptimizers& opt, double lr) {
  StepReport report;

  {
    Tape tape;
    auto pass = run_generators_const(tape, bundle, batch);
    Var total;
    for (auto m : kMappings) {
      Var loss = lsgan_disc_loss(tape, bundle.discriminator(m), tape.constant(real_for(m, batch)), pass.fake[index(m)]);
      report.disc[index(m)] = loss.value().item();
      total = total.valid() ? add(total, loss) : loss;
    }
    if (!std::isfinite(total.value().item())) non_finite("discriminator", report);
    tape.backward(total);
    for (auto m : kMappings) adam_step(bundle.discriminator(m).params(), opt.disc[index(m)], lr);
  }

  {
    Tape tape;
    auto pass = run_generators(tape, bundle, batch, true);
    std::array<Var, 4> gan;
    for (auto m : kMappings) {
      gan[index(m)] = lsgan_gen_loss(tape, bundle.discriminator(m), pass.fake[index(m)]);
      report.terms.gen_gan[index(m)] = gan[index(m)].value().item();
      report.fake[index(m)] = pass.fake[index(m)].value();
      report.collapsed += collapsed(report.fake[index(m)]);
    }
    ClampCounter clamps;
    Var ver = ver_dis_loss(tape, bundle, batch, pass);
    Var hor = hor_dis_loss(tape, bundle, batch, pass, &clamps);
    Var inter = inter_cycle_loss(tape, batch, pass);
    Var intra = intra_cycle_loss(tape, batch, pass);
    report.clamp_events = clamps.events;
    report.terms.ver_dis = ver.value().item();
    report.terms.hor_dis = hor.value().item();
    report.terms.inter_cyc = inter.value().item();
    report.terms.intra_cyc = intra.value().item();

    const auto& w = bundle.weights;
    Var ver_obj = add(add(add(gan[index(Mapping::X2Y)], gan[index(Mapping::Y2X)]), scale(ver, w.ver_dis)),
                      scale(inter, w.inter_cyc));
    Var hor_obj = add(add(add(gan[index(Mapping::X2X)], gan[index(Mapping::Y2Y)]), scale(hor, w.hor_dis)),
                      scale(intra, w.intra_cyc));
    report.ver_objective = ver_obj.value().item();
    report.hor_objective = hor_obj.value().item();
    if (!std::isfinite(report.ver_objective) || !std::isfinite(report.hor_objective)) non_finite("generator", report);
    tape.backward(add(ver_obj, hor_obj));
    for (auto m : kMappings) adam_step(bundle.generator(m).params(), opt.gen[index(m)], lr);
  }
  return report;
}

}  // namespace disgan
