#include "sgblend/activations.hpp"

#include <cmath>
#include <stdexcept>

namespace sgblend {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrt2OverPi = 0.79788456080286535588;
constexpr double kGeluCubic = 0.044715;

double swish_fwd(double beta, double x) { return x * sigmoid(beta * x); }

double swish_dx(double beta, double x) {
  const double s = sigmoid(beta * x);
  return s + x * (beta * s * (1.0 - s));
}

double gelu_exact_fwd(double x) { return x * (0.5 * std::erfc(-x * kInvSqrt2)); }

double gelu_exact_dx(double x) {
  const double cdf = 0.5 * std::erfc(-x * kInvSqrt2);
  const double pdf = kInvSqrt2Pi * std::exp(-0.5 * x * x);
  return cdf + x * pdf;
}

// 0.5 * (1 + tanh(u)) == sigmoid(2u); the sigmoid form keeps full relative
// accuracy in the negative tail where 1 + tanh(u) cancels.
double gelu_tanh_fwd(double x) {
  const double u = kSqrt2OverPi * (x + kGeluCubic * x * x * x);
  return x * sigmoid(2.0 * u);
}

double gelu_tanh_dx(double x) {
  const double u = kSqrt2OverPi * (x + kGeluCubic * x * x * x);
  const double s = sigmoid(2.0 * u);
  const double du = kSqrt2OverPi * (1.0 + 3.0 * kGeluCubic * x * x);
  return s + x * (2.0 * s * (1.0 - s)) * du;
}

double mish_fwd(double x) { return x * std::tanh(softplus(x)); }

double mish_dx(double x) {
  const double t = std::tanh(softplus(x));
  return t + x * (1.0 - t * t) * sigmoid(x);
}

double blend_gelu_fwd(GeluVariant v, double x) {
  return v == GeluVariant::exact ? gelu_exact_fwd(x) : gelu_tanh_fwd(x);
}

double blend_gelu_dx(GeluVariant v, double x) {
  return v == GeluVariant::exact ? gelu_exact_dx(x) : gelu_tanh_dx(x);
}

}  // namespace

std::string_view to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::relu: return "relu";
    case ActivationKind::swish: return "swish";
    case ActivationKind::gelu_exact: return "gelu-exact";
    case ActivationKind::gelu_tanh: return "gelu-tanh";
    case ActivationKind::mish: return "mish";
    case ActivationKind::sswish: return "sswish";
    case ActivationKind::sgblend: return "sgblend";
    case ActivationKind::identity: return "identity";
  }
  throw std::invalid_argument("unknown ActivationKind");
}

std::optional<ActivationKind> kind_from_string(std::string_view name) {
  for (ActivationKind k : all_kinds) {
    if (name == to_string(k)) return k;
  }
  if (name == "identity") return ActivationKind::identity;
  return std::nullopt;
}

std::string_view to_string(GeluVariant v) {
  return v == GeluVariant::exact ? "exact" : "tanh";
}

std::optional<GeluVariant> gelu_variant_from_string(std::string_view name) {
  if (name == "tanh") return GeluVariant::tanh_approx;
  if (name == "exact") return GeluVariant::exact;
  return std::nullopt;
}

bool has_alpha(ActivationKind kind) { return kind == ActivationKind::sgblend; }

bool has_beta(ActivationKind kind) {
  return kind == ActivationKind::swish || kind == ActivationKind::sswish ||
         kind == ActivationKind::sgblend;
}

bool has_gamma(ActivationKind kind) {
  return kind == ActivationKind::sswish || kind == ActivationKind::sgblend;
}

bool has_learnable_params(ActivationKind kind) { return has_beta(kind); }

double sigmoid(double x) {
  if (x >= 0.0) {
    const double e = std::exp(-x);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(x);
  return e / (1.0 + e);
}

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

double forward(ActivationKind kind, const ActivationParams& p, double x,
               GeluVariant blend_gelu) {
  switch (kind) {
    case ActivationKind::relu: return x > 0.0 ? x : 0.0;
    case ActivationKind::swish: return swish_fwd(p.beta, x);
    case ActivationKind::gelu_exact: return gelu_exact_fwd(x);
    case ActivationKind::gelu_tanh: return gelu_tanh_fwd(x);
    case ActivationKind::mish: return mish_fwd(x);
    case ActivationKind::sswish: return swish_fwd(p.beta, x) - p.gamma;
    case ActivationKind::sgblend: {
      // Composed from the same code paths as the standalone kinds so that
      // alpha = 1 reproduces sswish and alpha = 0 reproduces the gelu
      // component with zero floating-point difference.
      const double ss = swish_fwd(p.beta, x) - p.gamma;
      const double ge = blend_gelu_fwd(blend_gelu, x);
      return p.alpha * ss + (1.0 - p.alpha) * ge;
    }
    case ActivationKind::identity: return x;
  }
  throw std::invalid_argument("unknown ActivationKind");
}

double d_input(ActivationKind kind, const ActivationParams& p, double x,
               GeluVariant blend_gelu) {
  switch (kind) {
    case ActivationKind::relu: return x > 0.0 ? 1.0 : 0.0;
    case ActivationKind::swish: return swish_dx(p.beta, x);
    case ActivationKind::gelu_exact: return gelu_exact_dx(x);
    case ActivationKind::gelu_tanh: return gelu_tanh_dx(x);
    case ActivationKind::mish: return mish_dx(x);
    case ActivationKind::sswish: return swish_dx(p.beta, x);
    case ActivationKind::sgblend:
      return p.alpha * swish_dx(p.beta, x) +
             (1.0 - p.alpha) * blend_gelu_dx(blend_gelu, x);
    case ActivationKind::identity: return 1.0;
  }
  throw std::invalid_argument("unknown ActivationKind");
}

double d_beta_sswish(double beta, double x) {
  const double s = sigmoid(beta * x);
  return x * x * s * (1.0 - s);
}

double d_gamma_sswish() { return -1.0; }

double d_alpha_sgblend(const ActivationParams& p, double x, GeluVariant blend_gelu) {
  const double ss = swish_fwd(p.beta, x) - p.gamma;
  return ss - blend_gelu_fwd(blend_gelu, x);
}

}  // namespace sgblend
