#include "sgblend/params.hpp"

#include <algorithm>

namespace sgblend {

ParamStore init_params() { return ParamStore{}; }

ActivationParams constrained(const ParamStore& store) {
  return ActivationParams{sigmoid(store.alpha_raw), store.beta_raw, store.gamma};
}

double chain_alpha_grad(ParamStore& store, double dL_dalpha) {
  const double a = sigmoid(store.alpha_raw);
  const double g = dL_dalpha * a * (1.0 - a);
  store.d_alpha_raw += g;
  return g;
}

void project_beta(ParamStore& store) {
  store.beta_raw = std::min(kBetaMax, std::max(kBetaMin, store.beta_raw));
}

void zero_param_grads(ParamStore& store) {
  store.d_alpha_raw = 0.0;
  store.d_beta = 0.0;
  store.d_gamma = 0.0;
}

}  // namespace sgblend
