#include <doctest.h>

#include <bit>
#include <cmath>
#include <vector>

#include "sgblend/activations.hpp"
#include "sgblend/gradcheck.hpp"

using namespace sgblend;

namespace {

std::vector<double> grid(double lo, double hi, int n = 10001) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = lo + step * i;
  return xs;
}

ActivationParams params(double alpha, double beta, double gamma) {
  ActivationParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  return p;
}

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

}  // namespace

TEST_SUITE_BEGIN("activations");

TEST_CASE("sigmoid values and stability") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(1.0) == doctest::Approx(0.7310585786300049).epsilon(1e-12));
  CHECK(sigmoid(-50.0) > 0.0);
  CHECK(sigmoid(-50.0) < 1e-21);
  CHECK(std::isfinite(sigmoid(700.0)));
  CHECK(std::isfinite(sigmoid(-700.0)));
  CHECK(sigmoid(700.0) == 1.0);
  CHECK(sigmoid(-700.0) > 0.0);
}

TEST_CASE("softplus stability") {
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(softplus(700.0) == doctest::Approx(700.0).epsilon(1e-14));
  CHECK(softplus(-700.0) > 0.0);
  CHECK(std::isfinite(softplus(-700.0)));
}

TEST_CASE("forward values") {
  CHECK(forward(ActivationKind::sswish, params(0.5, 1.0, 0.5), 0.0) == -0.5);
  CHECK(forward(ActivationKind::sswish, params(0.5, 1.0, 0.0), 1.0) ==
        doctest::Approx(0.7310585786300049).epsilon(1e-12));
  CHECK(forward(ActivationKind::gelu_exact, {}, 1.0) ==
        doctest::Approx(0.8413447460685429).epsilon(1e-12));
  CHECK(forward(ActivationKind::gelu_tanh, {}, 1.0) ==
        doctest::Approx(0.8411919906082768).epsilon(1e-12));
  CHECK(forward(ActivationKind::sgblend, params(0.5, 1.0, 0.0), 0.0) == 0.0);
  CHECK(forward(ActivationKind::mish, {}, 0.0) == 0.0);
  CHECK(forward(ActivationKind::relu, {}, -3.0) == 0.0);
  CHECK(forward(ActivationKind::relu, {}, 3.0) == 3.0);
  CHECK(forward(ActivationKind::swish, params(0.5, 1.0, 0.0), 1.0) ==
        doctest::Approx(0.7310585786300049).epsilon(1e-12));
}

TEST_CASE("forward and d_input are finite across the stability range") {
  for (ActivationKind kind : all_kinds) {
    for (double x : {-700.0, -100.0, -1.0, 0.0, 1.0, 100.0, 700.0}) {
      CAPTURE(to_string(kind));
      CAPTURE(x);
      CHECK(std::isfinite(forward(kind, params(0.3, 2.0, 1.5), x)));
      CHECK(std::isfinite(d_input(kind, params(0.3, 2.0, 1.5), x)));
    }
  }
}

TEST_CASE("d_input values") {
  CHECK(d_input(ActivationKind::sswish, params(0.5, 1.0, 0.0), 0.0) == 0.5);
  CHECK(d_input(ActivationKind::sswish, params(0.5, 1.0, 0.0), 1.0) ==
        doctest::Approx(0.9276705118714867).epsilon(1e-12));
  CHECK(d_input(ActivationKind::gelu_exact, {}, 0.0) == 0.5);
  CHECK(d_input(ActivationKind::gelu_exact, {}, 1.0) ==
        doctest::Approx(1.0833154705876863).epsilon(1e-12));
  CHECK(d_input(ActivationKind::relu, {}, 0.0) == 0.0);
  CHECK(d_input(ActivationKind::relu, {}, -2.0) == 0.0);
  CHECK(d_input(ActivationKind::relu, {}, 2.0) == 1.0);
}

TEST_CASE("parameter derivatives") {
  CHECK(d_beta_sswish(1.0, 0.0) == 0.0);
  CHECK(d_beta_sswish(1.0, 1.0) == doctest::Approx(0.19661193324148185).epsilon(1e-12));
  CHECK(d_beta_sswish(2.0, -1.0) == doctest::Approx(0.10499358540350652).epsilon(1e-12));
  CHECK(d_gamma_sswish() == -1.0);
  CHECK(d_alpha_sgblend(params(0.5, 1.0, 0.0), 0.0) == 0.0);
  CHECK(d_alpha_sgblend(params(0.5, 1.0, 0.0), 1.0) ==
        doctest::Approx(-0.11013341197827183).epsilon(1e-10));
  // SSwish(0) = -1 with gamma = 1, GELU(0) = 0
  CHECK(d_alpha_sgblend(params(0.5, 1.0, 1.0), 0.0) == -1.0);
}

TEST_CASE("d_beta is non-negative") {
  for (double beta : {0.1, 0.7, 1.0, 4.0, 10.0}) {
    for (double x : grid(-20.0, 20.0, 401)) {
      REQUIRE(d_beta_sswish(beta, x) >= 0.0);
    }
  }
}

TEST_CASE("gamma finite difference is -1 to within 1e-10") {
  for (double x : {-3.0, -0.5, 0.0, 1.0, 8.0}) {
    for (double beta : {0.4, 1.0, 2.0}) {
      const double fd = central_diff(
          [&](double g) { return forward(ActivationKind::sswish, params(0.5, beta, g), x); },
          0.7, 1e-5);
      CHECK(fd == doctest::Approx(-1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("gradient-oracle agreement for every kind and variable") {
  for (ActivationKind kind : all_kinds) {
    for (GradVariable var : variables_for(kind)) {
      CAPTURE(to_string(kind));
      CAPTURE(to_string(var));
      const GradCheckReport report = check(kind, var, 1000, 7, 1e-5);
      CHECK(report.passed);
      CHECK(report.points_checked == 1000);
    }
  }
}

TEST_CASE("blend endpoints match the component kinds exactly") {
  const std::vector<double> xs = grid(-20.0, 20.0);
  for (double beta : {0.5, 1.0, 3.0}) {
    for (double gamma : {-1.5, 0.0, 2.0}) {
      double worst_sswish = 0.0;
      double worst_gelu = 0.0;
      for (double x : xs) {
        worst_sswish = std::max(
            worst_sswish,
            std::fabs(forward(ActivationKind::sgblend, params(1.0, beta, gamma), x) -
                      forward(ActivationKind::sswish, params(1.0, beta, gamma), x)));
        worst_gelu = std::max(
            worst_gelu,
            std::fabs(forward(ActivationKind::sgblend, params(0.0, beta, gamma), x) -
                      forward(ActivationKind::gelu_tanh, {}, x)));
      }
      CHECK(worst_sswish == 0.0);
      CHECK(worst_gelu == 0.0);
    }
  }
}

TEST_CASE("blend endpoint with the exact gelu variant") {
  for (double x : grid(-20.0, 20.0, 501)) {
    CHECK(forward(ActivationKind::sgblend, params(0.0, 1.0, 0.5), x, GeluVariant::exact) ==
          forward(ActivationKind::gelu_exact, {}, x));
  }
}

TEST_CASE("sswish decomposes as swish minus gamma") {
  for (double gamma : {-2.0, 0.5, 3.0}) {
    for (double beta : {0.3, 1.0, 5.0}) {
      for (double x : grid(-20.0, 20.0)) {
        const double lhs = forward(ActivationKind::sswish, params(0.5, beta, gamma), x);
        const double rhs = forward(ActivationKind::swish, params(0.5, beta, 0.0), x) - gamma;
        REQUIRE(std::fabs(lhs - rhs) <= 1e-15);
      }
    }
  }
}

// The tail reaches -gamma to within 1e-15 once beta * 50 is deep enough in
// the sigmoid tail (beta >= ~0.8 at x = -50); at beta = 0.1 the value is
// still 50 * sigmoid(-5) = 0.33 away.
TEST_CASE("lower asymptote approaches -gamma") {
  for (double beta : {0.8, 1.0, 2.0, 10.0}) {
    for (double gamma : {-2.0, 0.0, 3.0}) {
      const double f = forward(ActivationKind::sswish, params(0.5, beta, gamma), -50.0);
      CHECK(std::fabs(f + gamma) < 1e-15);
    }
  }
}

TEST_CASE("upper asymptote approaches x - gamma") {
  for (double gamma : {-2.0, 0.0, 3.0}) {
    const double f = forward(ActivationKind::sswish, params(0.5, 1.0, gamma), 50.0);
    CHECK(std::fabs(f - (50.0 - gamma)) < 1e-15);
  }
}

TEST_CASE("non-monotonic dip on the negative side") {
  bool found = false;
  double prev_f = 0.0;
  bool have_prev = false;
  for (double x : grid(-20.0, 20.0)) {
    if (x >= 0.0) break;
    const double f = forward(ActivationKind::sswish, params(0.5, 1.0, 0.0), x);
    if (have_prev && prev_f > f) {
      found = true;
      break;
    }
    prev_f = f;
    have_prev = true;
  }
  CHECK(found);
}

TEST_CASE("global lower bound scales as -0.27847 / beta") {
  // Dense-scan oracle for the minimum of u * sigmoid(u).
  double min_val = 0.0, argmin = 0.0;
  for (double u = -5.0; u <= 0.0; u += 1e-5) {
    const double v = u * sigmoid(u);
    if (v < min_val) {
      min_val = v;
      argmin = u;
    }
  }
  CHECK(min_val == doctest::Approx(-0.278465).epsilon(1e-4));
  CHECK(argmin == doctest::Approx(-1.2785).epsilon(1e-3));

  for (double beta : {0.1, 0.5, 1.0, 2.0, 10.0}) {
    double grid_min = 0.0;
    for (double x : grid(-20.0, 20.0)) {
      grid_min = std::min(grid_min,
                          forward(ActivationKind::sswish, params(0.5, beta, 0.0), x));
    }
    CHECK(grid_min >= -0.27847 / beta - 1e-6);
  }
}

TEST_CASE("d_input ignores gamma bitwise") {
  for (double x : grid(-20.0, 20.0)) {
    REQUIRE(same_bits(d_input(ActivationKind::sswish, params(0.5, 1.3, 0.0), x),
                      d_input(ActivationKind::sswish, params(0.5, 1.3, 5.0), x)));
    REQUIRE(same_bits(d_input(ActivationKind::sgblend, params(0.4, 1.3, 0.0), x),
                      d_input(ActivationKind::sgblend, params(0.4, 1.3, 5.0), x)));
    REQUIRE(same_bits(d_input(ActivationKind::sgblend, params(0.4, 1.3, 7.0), x),
                      d_input(ActivationKind::sgblend, params(0.4, 1.3, 0.0), x)));
  }
}

TEST_CASE("analytic derivative is smooth along the grid") {
  const std::vector<ActivationKind> kinds = {
      ActivationKind::sswish, ActivationKind::gelu_exact, ActivationKind::gelu_tanh,
      ActivationKind::mish, ActivationKind::sgblend};
  // Adjacent-point jumps are bounded by max |f''| times the grid spacing:
  // under 1e-3 on [-5, 5] and under 4e-3 on [-20, 20] at default parameters.
  for (ActivationKind kind : kinds) {
    CAPTURE(to_string(kind));
    double worst_fine = 0.0;
    double prev = d_input(kind, params(0.5, 1.0, 0.0), -5.0);
    for (double x : grid(-5.0, 5.0)) {
      if (x == -5.0) continue;
      const double d = d_input(kind, params(0.5, 1.0, 0.0), x);
      worst_fine = std::max(worst_fine, std::fabs(d - prev));
      prev = d;
    }
    CHECK(worst_fine < 1e-3);

    double worst_wide = 0.0;
    prev = d_input(kind, params(0.5, 1.0, 0.0), -20.0);
    for (double x : grid(-20.0, 20.0)) {
      if (x == -20.0) continue;
      const double d = d_input(kind, params(0.5, 1.0, 0.0), x);
      worst_wide = std::max(worst_wide, std::fabs(d - prev));
      prev = d;
    }
    CHECK(worst_wide < 4e-3);
  }
}

// Reported rather than asserted: the sign of the sswish input derivative for
// x >= 0 across the whole beta range.
TEST_CASE("sswish derivative sign scan for x >= 0") {
  double worst = std::numeric_limits<double>::infinity();
  double worst_beta = 0.0, worst_x = 0.0;
  for (double beta : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (double x = 0.0; x <= 50.0; x += 0.001) {
      const double d = d_input(ActivationKind::sswish, params(0.5, beta, 0.0), x);
      if (d < worst) {
        worst = d;
        worst_beta = beta;
        worst_x = x;
      }
    }
  }
  MESSAGE("min d_input(sswish) over x >= 0: ", worst, " at beta=", worst_beta,
          " x=", worst_x, (worst >= 0.0 ? " (non-negative)" : " (NEGATIVE)"));
  CHECK(std::isfinite(worst));
}

TEST_CASE("kind names round-trip") {
  for (ActivationKind kind : all_kinds) {
    REQUIRE(kind_from_string(to_string(kind)) == kind);
  }
  CHECK(!kind_from_string("selu").has_value());
  CHECK(kind_from_string("identity") == ActivationKind::identity);
}

TEST_SUITE_END();
