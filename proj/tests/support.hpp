#pragma once
// Shared fixtures for the unit tests and the acceptance binary.

#include <cmath>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "disgan/classifier.hpp"
#include "disgan/config.hpp"
#include "disgan/gan.hpp"
#include "disgan/rng.hpp"

namespace disgan::testing {

inline std::vector<double> random_point(Rng& rng, std::size_t dim, double scale = 1.0) {
  std::vector<double> v(dim);
  for (auto& x : v) x = scale * rng.normal();
  return v;
}

inline Tensor random_matrix(Rng& rng, std::size_t rows, std::size_t cols, double scale = 1.0) {
  Tensor t({rows, cols}, 0.0);
  for (auto& x : t.values()) x = scale * rng.normal();
  return t;
}

/// Small nonlinear classifier with non-zero biases, so kinks are unlikely.
inline ClassifierNet tiny_classifier(Rng& rng, std::size_t dim = 2, std::size_t hidden = 4) {
  ClassifierNet net(ClassifierArch{dim, false, hidden, hidden}, rng);
  for (auto* ps : net.param_sets())
    for (auto& p : ps->items())
      for (auto& v : p.tensor.values()) v += 0.1 * rng.normal();
  return net;
}

inline std::shared_ptr<const AuxiliaryClassifier> tiny_aux(Rng& rng, std::size_t dim = 2, std::size_t hidden = 4) {
  return std::make_shared<const AuxiliaryClassifier>(freeze(tiny_classifier(rng, dim, hidden)));
}

inline GanBundle tiny_bundle(Rng& rng, std::shared_ptr<const AuxiliaryClassifier> aux, std::size_t hidden = 4,
                             GeometryOptions geo = {}) {
  auto b = GanBundle::create(GanArch{aux->input_dim(), hidden, hidden}, LossWeights{}, geo, aux, rng);
  for (auto* nets : {&b.generators, &b.discriminators})
    for (auto& n : *nets)
      for (auto& p : n.params().items())
        for (auto& v : p.tensor.values()) v += 0.1 * rng.normal();
  return b;
}

inline QuadBatch random_batch(const AuxiliaryClassifier& aux, const GeometryOptions& geo, std::size_t rows, Rng& rng,
                              ClampCounter* counter = nullptr) {
  const std::size_t d = aux.input_dim();
  auto x = random_matrix(rng, rows, d);
  auto xp = random_matrix(rng, rows, d);
  auto y = random_matrix(rng, rows, d);
  auto yp = random_matrix(rng, rows, d);
  for (auto* t : {&x, &xp}) t->values()[0] -= 1.0;
  for (auto* t : {&y, &yp}) t->values()[0] += 1.0;
  return make_quad_batch(aux, geo, x, xp, y, yp, counter);
}

/// Linear "generator" whose input is [z, s]: G(z, s) = A z + c s.
inline Mlp linear_generator(std::size_t dim, const std::vector<double>& z_weights_diag, double s_weight) {
  Mlp g({dim + 1, dim}, {Activation::identity});
  auto& w = g.params().get("l0.w").tensor;  // (D+1) x D
  for (std::size_t j = 0; j < dim; ++j) w.at(j, j) = z_weights_diag[j];
  for (std::size_t j = 0; j < dim; ++j) w.at(dim, j) = s_weight;
  return g;
}

/// G(z, s) = z + s (every output dimension shifted by s).
inline Mlp shift_generator(std::size_t dim) { return linear_generator(dim, std::vector<double>(dim, 1.0), 1.0); }
/// G(z, s) = z.
inline Mlp identity_generator(std::size_t dim) { return linear_generator(dim, std::vector<double>(dim, 1.0), 0.0); }

struct GradientCheck {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  std::string worst;
};

/// Compares the gradients already accumulated in `sets` against central
/// differences of `loss` (step h), entry by entry. Relative error is
/// |a - n| / max(|a|, |n|, floor); the floor sits above the ~1e-10 round-off
/// of a central difference so exact zeros are not reported as relative noise.
inline void compare_gradients(const std::vector<ParamSet*>& sets, const std::function<double()>& loss,
                              GradientCheck& out, double h = 1e-6, double floor = 1e-5) {
  for (auto* ps : sets) {
    for (auto& p : ps->items()) {
      if (p.frozen) continue;
      const std::vector<double> analytic =
          p.tensor.has_grad() ? p.tensor.grad() : std::vector<double>(p.tensor.size(), 0.0);
      for (std::size_t i = 0; i < p.tensor.size(); ++i) {
        const double keep = p.tensor[i];
        p.tensor[i] = keep + h;
        const double up = loss();
        p.tensor[i] = keep - h;
        const double down = loss();
        p.tensor[i] = keep;
        const double numeric = (up - down) / (2.0 * h);
        const double rel =
            std::abs(analytic[i] - numeric) / std::max({std::abs(analytic[i]), std::abs(numeric), floor});
        ++out.checked;
        if (rel > out.max_rel_error) {
          out.max_rel_error = rel;
          out.worst = p.name + "[" + std::to_string(i) + "] analytic=" + std::to_string(analytic[i]) +
                      " numeric=" + std::to_string(numeric);
        }
      }
      p.tensor.clear_grad();
    }
  }
}

inline std::vector<ParamSet*> generator_sets(GanBundle& b) {
  std::vector<ParamSet*> out;
  for (auto& g : b.generators) out.push_back(&g.params());
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("disgan_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace disgan::testing
