#include "sgblend/gradcheck.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgblend/rng.hpp"

namespace sgblend {

std::string_view to_string(GradVariable v) {
  switch (v) {
    case GradVariable::input: return "input";
    case GradVariable::alpha: return "alpha";
    case GradVariable::beta: return "beta";
    case GradVariable::gamma: return "gamma";
  }
  throw std::invalid_argument("unknown GradVariable");
}

std::optional<GradVariable> variable_from_string(std::string_view name) {
  if (name == "input") return GradVariable::input;
  if (name == "alpha") return GradVariable::alpha;
  if (name == "beta") return GradVariable::beta;
  if (name == "gamma") return GradVariable::gamma;
  return std::nullopt;
}

std::vector<GradVariable> variables_for(ActivationKind kind) {
  std::vector<GradVariable> vars{GradVariable::input};
  if (has_alpha(kind)) vars.push_back(GradVariable::alpha);
  if (has_beta(kind)) vars.push_back(GradVariable::beta);
  if (has_gamma(kind)) vars.push_back(GradVariable::gamma);
  return vars;
}

bool variable_applies(ActivationKind kind, GradVariable v) {
  switch (v) {
    case GradVariable::input: return true;
    case GradVariable::alpha: return has_alpha(kind);
    case GradVariable::beta: return has_beta(kind);
    case GradVariable::gamma: return has_gamma(kind);
  }
  return false;
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
  const double fp = f(x + h);
  const double fm = f(x - h);
  if (!std::isfinite(fp) || !std::isfinite(fm)) {
    throw std::runtime_error("central_diff: non-finite function value near x=" +
                             std::to_string(x));
  }
  return (fp - fm) / (2.0 * h);
}

double rel_error(double analytic, double numeric) {
  const double denom =
      std::max({std::fabs(analytic), std::fabs(numeric), 1e-8});
  return std::fabs(analytic - numeric) / denom;
}

GradCheckReport check(ActivationKind kind, GradVariable variable, int n_points,
                      std::uint64_t seed, double tol) {
  if (n_points < 1) throw std::invalid_argument("check: n_points must be >= 1");
  if (tol <= 0.0) throw std::invalid_argument("check: tol must be > 0");
  if (!variable_applies(kind, variable)) {
    throw std::invalid_argument(std::string("check: variable '") +
                                std::string(to_string(variable)) +
                                "' does not apply to kind '" +
                                std::string(to_string(kind)) + "'");
  }

  SplitMix64 rng(seed);
  GradCheckReport report;
  report.kind = kind;
  report.variable = variable;
  report.points_checked = n_points;

  for (int i = 0; i < n_points; ++i) {
    const double x = rng.uniform(-10.0, 10.0);
    ActivationParams p;
    // Sampling bounds keep the finite-difference signal above the roundoff
    // floor of the prescribed step size: |beta * x| <= 12 stays out of
    // sigmoid saturation, and alpha >= 0.05 keeps the alpha-scaled blend
    // gradients above the 1e-8 denominator floor. All values are valid
    // parameter settings.
    p.alpha = rng.uniform(0.05, 0.95);
    p.beta = rng.uniform(0.1, 1.2);
    p.gamma = rng.uniform(-3.0, 3.0);

    double analytic = 0.0;
    double numeric = 0.0;
    switch (variable) {
      case GradVariable::input: {
        analytic = d_input(kind, p, x);
        const double h = 1e-5 * std::max(1.0, std::fabs(x));
        numeric = central_diff([&](double t) { return forward(kind, p, t); }, x, h);
        break;
      }
      case GradVariable::alpha: {
        analytic = d_alpha_sgblend(p, x);
        const double h = 1e-5 * std::max(1.0, std::fabs(p.alpha));
        numeric = central_diff(
            [&](double a) {
              ActivationParams q = p;
              q.alpha = a;
              return forward(kind, q, x);
            },
            p.alpha, h);
        break;
      }
      case GradVariable::beta: {
        const double db = d_beta_sswish(p.beta, x);
        analytic = kind == ActivationKind::sgblend ? p.alpha * db : db;
        const double h = 1e-5 * std::max(1.0, std::fabs(p.beta));
        numeric = central_diff(
            [&](double b) {
              ActivationParams q = p;
              q.beta = b;
              return forward(kind, q, x);
            },
            p.beta, h);
        break;
      }
      case GradVariable::gamma: {
        analytic = kind == ActivationKind::sgblend ? -p.alpha : d_gamma_sswish();
        const double h = 1e-5 * std::max(1.0, std::fabs(p.gamma));
        numeric = central_diff(
            [&](double c) {
              ActivationParams q = p;
              q.gamma = c;
              return forward(kind, q, x);
            },
            p.gamma, h);
        break;
      }
    }

    const double err = rel_error(analytic, numeric);
    if (err > report.max_rel_error) {
      report.max_rel_error = err;
      report.worst_point = x;
    }
  }

  report.passed = report.max_rel_error < tol;
  return report;
}

}  // namespace sgblend
