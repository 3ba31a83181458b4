#pragma once

#include <array>
#include <optional>
#include <string_view>

namespace sgblend {

enum class ActivationKind {
  relu,
  swish,       // x * sigmoid(beta * x)
  gelu_exact,  // x * Phi(x), Phi the standard normal CDF
  gelu_tanh,   // tanh approximation of GELU
  mish,        // x * tanh(softplus(x))
  sswish,      // x * sigmoid(beta * x) - gamma
  sgblend,     // alpha * SSwish + (1 - alpha) * GELU
  identity,    // linear output layers only, not part of the comparison set
};

// The seven kinds the harness certifies and compares.
inline constexpr std::array<ActivationKind, 7> all_kinds = {
    ActivationKind::relu,       ActivationKind::swish, ActivationKind::gelu_exact,
    ActivationKind::gelu_tanh,  ActivationKind::mish,  ActivationKind::sswish,
    ActivationKind::sgblend,
};

// Which GELU form the blend inside SGBlend uses. Standalone gelu_exact /
// gelu_tanh kinds are unaffected.
enum class GeluVariant { tanh_approx, exact };

// Constrained parameter values as seen by the kernels: alpha in [0, 1],
// beta in [0.1, 10], gamma unbounded. Enforcement lives in ParamStore.
struct ActivationParams {
  double alpha = 0.5;
  double beta = 1.0;
  double gamma = 0.0;
};

std::string_view to_string(ActivationKind kind);
std::optional<ActivationKind> kind_from_string(std::string_view name);

std::string_view to_string(GeluVariant v);
std::optional<GeluVariant> gelu_variant_from_string(std::string_view name);

// Learnable parameters per kind: swish has beta; sswish beta and gamma;
// sgblend all three; the rest none.
bool has_alpha(ActivationKind kind);
bool has_beta(ActivationKind kind);
bool has_gamma(ActivationKind kind);
bool has_learnable_params(ActivationKind kind);

// 1 / (1 + e^-x). Only ever exponentiates a non-positive argument, so it is
// finite for |x| up to 700 and beyond.
double sigmoid(double x);

// log(1 + e^x) with the same overflow discipline as sigmoid.
double softplus(double x);

double forward(ActivationKind kind, const ActivationParams& p, double x,
               GeluVariant blend_gelu = GeluVariant::tanh_approx);

// df/dx. ReLU at x = 0 returns the subgradient choice 0. gamma never enters
// any input derivative.
double d_input(ActivationKind kind, const ActivationParams& p, double x,
               GeluVariant blend_gelu = GeluVariant::tanh_approx);

// d/dbeta [x * sigmoid(beta x) - gamma] = x^2 * s * (1 - s), s = sigmoid(beta x).
// Shared by swish, sswish and (scaled by alpha) sgblend.
double d_beta_sswish(double beta, double x);

// d/dgamma of SSwish: exactly -1.
double d_gamma_sswish();

// d/dalpha of the blend: SSwish(x) - GELU(x). Independent of alpha.
double d_alpha_sgblend(const ActivationParams& p, double x,
                       GeluVariant blend_gelu = GeluVariant::tanh_approx);

}  // namespace sgblend
