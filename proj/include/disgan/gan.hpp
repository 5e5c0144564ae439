#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>

#include "disgan/autodiff.hpp"
#include "disgan/classifier.hpp"
#include "disgan/geometry.hpp"
#include "disgan/mlp.hpp"
#include "disgan/optim.hpp"

namespace disgan {

/// The four distance-conditioned mappings. X2Y/Y2X are inter-domain and
/// conditioned on vertical distances; X2X/Y2Y are intra-domain and
/// conditioned on horizontal distances.
enum class Mapping : std::size_t { X2Y = 0, Y2X = 1, X2X = 2, Y2Y = 3 };

inline constexpr std::array<Mapping, 4> kMappings{Mapping::X2Y, Mapping::Y2X, Mapping::X2X, Mapping::Y2Y};

std::string to_string(Mapping m);
Mapping mapping_from_string(const std::string& s);
/// Label of the domain a mapping writes into: +1 for X2Y and Y2Y, -1 otherwise.
int target_label(Mapping m);
inline std::size_t index(Mapping m) { return static_cast<std::size_t>(m); }

struct LossWeights {
  double ver_dis = 0.1;
  double hor_dis = 0.001;
  double inter_cyc = 10.0;
  double intra_cyc = 10.0;

  /// Enforces 0.01 <= ver_dis <= 0.1, 0.001 <= hor_dis <= 0.01,
  /// hor_dis <= ver_dis and positive cycle weights.
  void validate() const;
};

struct GanArch {
  std::size_t dim = 2;
  std::size_t gen_hidden = 32;
  std::size_t disc_hidden = 32;
};

/// Generator: (D+1) -> hidden (tanh) -> hidden (tanh) -> D, the extra input
/// being the signed conditioning scalar.
Mlp make_generator(const GanArch& arch, Rng& rng);
/// Discriminator: D -> hidden (tanh) -> 1, unsquashed (least-squares target).
Mlp make_discriminator(const GanArch& arch, Rng& rng);

struct GanBundle {
  std::array<Mlp, 4> generators;
  std::array<Mlp, 4> discriminators;
  LossWeights weights;
  GeometryOptions geometry;
  std::shared_ptr<const AuxiliaryClassifier> aux;

  static GanBundle create(const GanArch& arch, const LossWeights& weights, const GeometryOptions& geometry,
                          std::shared_ptr<const AuxiliaryClassifier> aux, Rng& rng);

  Mlp& generator(Mapping m) { return generators[index(m)]; }
  const Mlp& generator(Mapping m) const { return generators[index(m)]; }
  Mlp& discriminator(Mapping m) { return discriminators[index(m)]; }
  const Mlp& discriminator(Mapping m) const { return discriminators[index(m)]; }
  std::size_t dim() const { return generators[0].out_dim(); }

  /// G(z, s) for a (B x D) batch and B conditioning scalars.
  Tensor generate(Mapping m, const Tensor& z, const std::vector<double>& conditioning) const;
};

/// One minibatch of training quadruples. Row r pairs source x_src[r] with
/// co-sample x_pair[r], and y_src[r] with y_pair[r]. The distance columns are
/// measured by the frozen classifier and enter every loss as constants.
struct QuadBatch {
  Tensor x_src, x_pair, y_src, y_pair;  // (B x D)
  Tensor dv_x, dv_y;                    // d_v(x_src), d_v(y_src)        (B x 1)
  Tensor dh_x, dh_y;                    // d_h(x_src,x_pair), d_h(y_src,y_pair)
  std::size_t rows() const { return x_src.rows(); }
};

QuadBatch make_quad_batch(const AuxiliaryClassifier& aux, const GeometryOptions& geometry, Tensor x_src,
                          Tensor x_pair, Tensor y_src, Tensor y_pair, ClampCounter* counter = nullptr);

/// Signed conditioning column used by each forward translation.
Tensor forward_conditioning(Mapping m, const QuadBatch& batch);
/// Signed conditioning column of the inverse (cycle) translation applied to
/// the output of mapping m.
Tensor inverse_conditioning(Mapping m, const QuadBatch& batch);

/// All generator outputs of one pass, recorded on a tape.
struct GeneratorPass {
  std::array<Var, 4> fake;           // forward translations, by Mapping
  std::array<Var, 4> reconstructed;  // cycle reconstructions of each source
};

GeneratorPass run_generators(Tape& tape, GanBundle& bundle, const QuadBatch& batch, bool trainable);

struct LsganLosses {
  double disc_loss;
  double gen_loss;
};

/// disc: E[(D(real)-1)^2] + E[D(fake)^2]; gen: E[(D(fake)-1)^2].
LsganLosses lsgan_loss(const Mlp& disc, const Tensor& real, const Tensor& fake);

Var lsgan_disc_loss(Tape& tape, Mlp& disc, Var real, Var fake);
Var lsgan_gen_loss(Tape& tape, const Mlp& disc, Var fake);

/// Terms making up both objectives, in the order they are summed.
struct ObjectiveTerms {
  std::array<double, 4> gen_gan{};  // generator LSGAN terms by Mapping
  double ver_dis = 0.0;
  double hor_dis = 0.0;
  double inter_cyc = 0.0;
  double intra_cyc = 0.0;
};

double verdisgan_objective(const ObjectiveTerms& t, const LossWeights& w);
double hordisgan_objective(const ObjectiveTerms& t, const LossWeights& w);

double ver_dis_loss(const GanBundle& bundle, const QuadBatch& batch);
double hor_dis_loss(const GanBundle& bundle, const QuadBatch& batch);
struct CycleLosses {
  double inter;
  double intra;
};
CycleLosses cycle_losses(const GanBundle& bundle, const QuadBatch& batch);
ObjectiveTerms objective_terms(const GanBundle& bundle, const QuadBatch& batch);

// Tape-level building blocks shared by the scalar functions above and the
// training step.
Var ver_dis_loss(Tape& tape, const GanBundle& bundle, const QuadBatch& batch, const GeneratorPass& pass);
Var hor_dis_loss(Tape& tape, const GanBundle& bundle, const QuadBatch& batch, const GeneratorPass& pass,
                 ClampCounter* counter = nullptr);
Var inter_cycle_loss(Tape& tape, const QuadBatch& batch, const GeneratorPass& pass);
Var intra_cycle_loss(Tape& tape, const QuadBatch& batch, const GeneratorPass& pass);

struct GanOptimizers {
  std::array<AdamState, 4> gen;
  std::array<AdamState, 4> disc;

  static GanOptimizers with(double beta1, double beta2, double base_lr);
};

struct StepReport {
  std::array<double, 4> disc{};  // LSGAN discriminator losses by Mapping
  ObjectiveTerms terms;
  double ver_objective = 0.0;
  double hor_objective = 0.0;
  std::size_t clamp_events = 0;     // negative radicands on generated samples
  std::size_t collapsed = 0;        // generators whose batch output had no spread
  std::array<Tensor, 4> fake;       // generator outputs used for the update
};

class NonFiniteLoss : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One discriminator update (sum of the four LSGAN disc terms) followed by
/// one generator update (VerDisGAN + HorDisGAN objectives). Discriminator
/// losses are reported at the pre-update parameters; generator terms at the
/// parameters in force when the generator gradient is taken, i.e. after the
/// discriminator update and before the generator update.
StepReport train_step(GanBundle& bundle, const QuadBatch& batch, GanOptimizers& opt, double lr);

}  // namespace disgan
