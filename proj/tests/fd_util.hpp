// Test-only oracles: a finite-difference gradient check over a whole model
// and a brute-force best-linear-classifier baseline. Both touch only forward
// evaluation paths, never the analytic gradients they are used to certify.
#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sgblend/data.hpp"
#include "sgblend/gradcheck.hpp"
#include "sgblend/nn.hpp"

namespace sgblend::testutil {

inline double model_loss(MlpModel& model, const Matrix& x, const std::vector<int>& y) {
  return softmax_cross_entropy(model.forward(x), y).first;
}

struct ModelFdResult {
  double max_rel_error = 0.0;
  std::size_t params_checked = 0;
};

// Central finite differences of the loss in every parameter (weights,
// biases, raw activation parameters) against the accumulated analytic
// gradients of one backward pass.
inline ModelFdResult model_fd_check(MlpModel& model, const Matrix& x,
                                    const std::vector<int>& y) {
  model.zero_grads();
  const Matrix logits = model.forward(x);
  auto [loss, dlogits] = softmax_cross_entropy(logits, y);
  (void)loss;
  model.backward(dlogits);

  // Copy the analytic gradients before finite differences overwrite state.
  std::vector<std::vector<double>> analytic;
  for (const ParamSlot& slot : model.param_slots()) {
    analytic.emplace_back(slot.grad.begin(), slot.grad.end());
  }

  ModelFdResult result;
  std::vector<ParamSlot> slots = model.param_slots();
  for (std::size_t s = 0; s < slots.size(); ++s) {
    for (std::size_t i = 0; i < slots[s].value.size(); ++i) {
      double& p = slots[s].value[i];
      const double orig = p;
      const double h = 1e-5 * std::max(1.0, std::fabs(orig));
      p = orig + h;
      const double lp = model_loss(model, x, y);
      p = orig - h;
      const double lm = model_loss(model, x, y);
      p = orig;
      const double fd = (lp - lm) / (2.0 * h);
      result.max_rel_error =
          std::max(result.max_rel_error, rel_error(analytic[s][i], fd));
      ++result.params_checked;
    }
  }
  return result;
}

// Exact best accuracy of a linear classifier sign(w.x - t) over a grid of
// directions, by sweeping all thresholds along each direction.
inline double best_linear_accuracy(const Dataset& ds, int n_angles = 720) {
  const std::size_t n = ds.size();
  std::vector<std::pair<double, int>> projected(n);
  double best = 0.0;
  for (int a = 0; a < n_angles; ++a) {
    const double theta = std::numbers::pi * static_cast<double>(a) /
                         static_cast<double>(n_angles);
    const double cx = std::cos(theta);
    const double cy = std::sin(theta);
    for (std::size_t i = 0; i < n; ++i) {
      projected[i] = {cx * ds.X(i, 0) + cy * ds.X(i, 1), ds.y[i]};
    }
    std::sort(projected.begin(), projected.end());
    // Prefix counts of class 1; split k predicts one class for the first k
    // points and the other for the rest.
    std::size_t ones_total = 0;
    for (const auto& [p, label] : projected) ones_total += static_cast<std::size_t>(label);
    std::size_t ones_left = 0;
    for (std::size_t k = 0; k <= n; ++k) {
      const std::size_t zeros_left = k - ones_left;
      const std::size_t ones_right = ones_total - ones_left;
      const std::size_t correct_a = zeros_left + ones_right;  // left=0, right=1
      const std::size_t correct_b = n - correct_a;            // left=1, right=0
      best = std::max(best, static_cast<double>(std::max(correct_a, correct_b)) /
                                static_cast<double>(n));
      if (k < n) ones_left += static_cast<std::size_t>(projected[k].second);
    }
  }
  return best;
}

}  // namespace sgblend::testutil
