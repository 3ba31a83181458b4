#pragma once

#include "sgblend/activations.hpp"

namespace sgblend {

inline constexpr double kBetaMin = 0.1;
inline constexpr double kBetaMax = 10.0;

// Per-layer learnable activation parameters in raw form, with one gradient
// accumulator per field. alpha is stored as the logistic pre-image of the
// blend coefficient, so no optimizer step can push it out of (0, 1); beta is
// stored directly and clamped right after every update; gamma is free.
//
// Defaults give the initialization alpha = 0.5, beta = 1, gamma = 0 exactly.
struct ParamStore {
  double alpha_raw = 0.0;
  double beta_raw = 1.0;
  double gamma = 0.0;

  double d_alpha_raw = 0.0;
  double d_beta = 0.0;
  double d_gamma = 0.0;
};

ParamStore init_params();

// Raw -> constrained values for the kernels.
ActivationParams constrained(const ParamStore& store);

// Chain rule through the logistic reparameterization: returns
// dL_dalpha * a * (1 - a) with a = logistic(alpha_raw), and accumulates the
// result into store.d_alpha_raw.
double chain_alpha_grad(ParamStore& store, double dL_dalpha);

// Clamp beta_raw to [0.1, 10]. Call immediately after each optimizer update.
void project_beta(ParamStore& store);

void zero_param_grads(ParamStore& store);

}  // namespace sgblend
