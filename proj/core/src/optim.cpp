#include "sgblend/optim.hpp"

#include <cmath>
#include <stdexcept>

namespace sgblend {
namespace {

std::vector<double>& slot_buffer(std::vector<std::vector<double>>& buffers,
                                 std::size_t slot, std::size_t n) {
  if (buffers.size() <= slot) buffers.resize(slot + 1);
  std::vector<double>& buf = buffers[slot];
  if (buf.empty()) buf.assign(n, 0.0);
  if (buf.size() != n) throw std::invalid_argument("optimizer: slot size changed");
  return buf;
}

}  // namespace

void sgd_step(SgdState& state, std::size_t slot, std::span<double> param,
              std::span<const double> grad, bool apply_decay) {
  if (param.size() != grad.size()) {
    throw std::invalid_argument("sgd_step: param/grad size mismatch");
  }
  std::vector<double>& vel = slot_buffer(state.velocity, slot, param.size());
  for (std::size_t i = 0; i < param.size(); ++i) {
    const double g = grad[i] + (apply_decay ? state.weight_decay * param[i] : 0.0);
    vel[i] = state.momentum * vel[i] + g;
    param[i] -= state.lr * vel[i];
  }
}

void adam_next_step(AdamState& state) { ++state.step_count; }

void adam_step(AdamState& state, std::size_t slot, std::span<double> param,
               std::span<const double> grad) {
  if (param.size() != grad.size()) {
    throw std::invalid_argument("adam_step: param/grad size mismatch");
  }
  if (state.step_count < 1) {
    throw std::logic_error("adam_step: call adam_next_step first");
  }
  std::vector<double>& m = slot_buffer(state.m, slot, param.size());
  std::vector<double>& v = slot_buffer(state.v, slot, param.size());
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * grad[i];
    v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * grad[i] * grad[i];
    const double mhat = m[i] / bc1;
    const double vhat = v[i] / bc2;
    param[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

namespace {

// Improvement means strictly better than best by more than min_delta.
// NaN never improves.
bool improved(double metric, double best, double min_delta) {
  if (std::isnan(metric)) return false;
  return metric < best - min_delta;
}

}  // namespace

double plateau_update(PlateauState& state, double val_metric) {
  if (improved(val_metric, state.best_metric, state.min_delta)) {
    state.best_metric = val_metric;
    state.epochs_since_improve = 0;
  } else {
    ++state.epochs_since_improve;
    if (state.epochs_since_improve > state.patience) {
      state.lr *= state.factor;
      state.epochs_since_improve = 0;
    }
  }
  return state.lr;
}

bool early_stop_update(EarlyStopState& state, double val_metric, int epoch) {
  if (improved(val_metric, state.best_metric, state.min_delta)) {
    state.best_metric = val_metric;
    state.epochs_since_improve = 0;
    state.best_epoch = epoch;
    return false;
  }
  ++state.epochs_since_improve;
  return state.epochs_since_improve > state.patience;
}

}  // namespace sgblend
