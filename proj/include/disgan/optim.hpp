#pragma once

#include <cstdint>
#include <vector>

#include "disgan/params.hpp"

namespace disgan {

struct AdamState {
  double beta1 = 0.5;
  double beta2 = 0.999;
  double eps = 1e-8;
  double base_lr = 1e-4;
  std::uint64_t t = 0;
  // indexed like ParamSet::items(); sized lazily on the first step
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

/// One bias-corrected Adam step over every non-frozen parameter, then clears
/// all gradients. Throws if a trainable parameter has no gradient.
void adam_step(ParamSet& params, AdamState& state, double lr);

/// Constant base_lr for the first warm_epochs, then a linear ramp that hits
/// exactly 0 at epoch == total_epochs.
double lr_schedule(int epoch, int total_epochs = 50, int warm_epochs = 25, double base_lr = 1e-4);

}  // namespace disgan
