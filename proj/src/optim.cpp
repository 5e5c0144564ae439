#include "disgan/optim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace disgan {

void adam_step(ParamSet& params, AdamState& state, double lr) {
  auto& items = params.items();
  for (const auto& p : items) {
    if (!p.frozen && !p.tensor.has_grad()) throw std::logic_error("adam_step: parameter " + p.name + " has no gradient");
  }
  if (state.m.size() != items.size()) {
    state.m.resize(items.size());
    state.v.resize(items.size());
  }
  state.t += 1;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < items.size(); ++i) {
    auto& p = items[i];
    if (p.frozen) {
      p.tensor.clear_grad();
      continue;
    }
    auto& m = state.m[i];
    auto& v = state.v[i];
    if (m.size() != p.tensor.size()) {
      m.assign(p.tensor.size(), 0.0);
      v.assign(p.tensor.size(), 0.0);
    }
    const auto& g = p.tensor.grad();
    auto& w = p.tensor.values();
    for (std::size_t k = 0; k < w.size(); ++k) {
      m[k] = state.beta1 * m[k] + (1.0 - state.beta1) * g[k];
      v[k] = state.beta2 * v[k] + (1.0 - state.beta2) * g[k] * g[k];
      const double m_hat = m[k] / c1;
      const double v_hat = v[k] / c2;
      w[k] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
    p.tensor.clear_grad();
  }
}

double lr_schedule(int epoch, int total_epochs, int warm_epochs, double base_lr) {
  if (total_epochs < 1 || warm_epochs < 0 || warm_epochs > total_epochs) {
    throw std::invalid_argument("lr_schedule: need 0 <= warm_epochs <= total_epochs and total_epochs >= 1");
  }
  if (epoch < 0 || epoch > total_epochs) {
    throw std::out_of_range("lr_schedule: epoch " + std::to_string(epoch) + " outside [0, " +
                            std::to_string(total_epochs) + "]");
  }
  if (epoch == total_epochs) return 0.0;
  if (epoch < warm_epochs) return base_lr;
  return base_lr * static_cast<double>(total_epochs - epoch) / static_cast<double>(total_epochs - warm_epochs);
}

}  // namespace disgan
