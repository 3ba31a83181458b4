#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "sgblend/activations.hpp"

namespace sgblend {

enum class GradVariable { input, alpha, beta, gamma };

std::string_view to_string(GradVariable v);
std::optional<GradVariable> variable_from_string(std::string_view name);

// Variables with an analytic derivative for this kind, input first.
std::vector<GradVariable> variables_for(ActivationKind kind);
bool variable_applies(ActivationKind kind, GradVariable v);

struct GradCheckReport {
  ActivationKind kind = ActivationKind::relu;
  GradVariable variable = GradVariable::input;
  int points_checked = 0;
  double max_rel_error = 0.0;
  double worst_point = 0.0;  // input x at which the worst error occurred
  bool passed = false;
};

// (f(x+h) - f(x-h)) / (2h). Throws std::runtime_error if either evaluation
// is non-finite. By construction this only ever touches the forward path of
// the function it is handed, never an analytic derivative.
double central_diff(const std::function<double(double)>& f, double x, double h);

// |a - n| / max(|a|, |n|, 1e-8). The floor keeps the metric meaningful when
// the true derivative is near zero.
double rel_error(double analytic, double numeric);

// Certify one analytic derivative against the central-difference oracle on
// n_points inputs drawn uniformly from [-10, 10], each with fresh random
// valid parameters (alpha in [0.05,0.95], beta in [0.1,1.2], gamma in [-3,3]).
// Step size h = 1e-5 * max(1, |v|) in the varied variable v. Deterministic
// for a fixed seed. Throws std::invalid_argument if the variable does not
// apply to the kind.
GradCheckReport check(ActivationKind kind, GradVariable variable, int n_points,
                      std::uint64_t seed, double tol);

}  // namespace sgblend
