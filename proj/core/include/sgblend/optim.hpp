#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace sgblend {

// SGD with classical momentum: v = mu * v + g', p -= lr * v, where
// g' = g + weight_decay * p when decay applies (weights and biases only).
struct SgdState {
  double lr = 0.01;
  double momentum = 0.9;
  double weight_decay = 0.0005;
  std::vector<std::vector<double>> velocity;  // per slot, sized on first use
};

void sgd_step(SgdState& state, std::size_t slot, std::span<double> param,
              std::span<const double> grad, bool apply_decay);

// Bias-corrected Adam with the usual defaults.
struct AdamState {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::int64_t step_count = 0;
  std::vector<std::vector<double>> m;  // first moments, per slot
  std::vector<std::vector<double>> v;  // second moments, per slot
};

// Advance the shared step counter; call once per optimization step, before
// the per-tensor updates of that step.
void adam_next_step(AdamState& state);

void adam_step(AdamState& state, std::size_t slot, std::span<double> param,
               std::span<const double> grad);

// ReduceLROnPlateau on a lower-is-better metric: once patience + 1
// consecutive epochs pass without an improvement of more than min_delta,
// multiply lr by factor and restart the count. NaN metrics count as
// non-improvements.
struct PlateauState {
  double lr = 0.01;
  int patience = 3;
  double factor = 0.2;
  double min_delta = 1e-8;
  double best_metric = std::numeric_limits<double>::infinity();
  int epochs_since_improve = 0;
};

// Returns the (possibly reduced) learning rate.
double plateau_update(PlateauState& state, double val_metric);

struct EarlyStopState {
  int patience = 5;
  double min_delta = 1e-8;
  double best_metric = std::numeric_limits<double>::infinity();
  int epochs_since_improve = 0;
  int best_epoch = 0;
};

// Returns true once patience + 1 consecutive epochs pass without
// improvement. On improvement, epochs_since_improve resets to 0 and
// best_epoch records `epoch`; the caller snapshots the model then, so the
// reported model can be the best one rather than the last.
bool early_stop_update(EarlyStopState& state, double val_metric, int epoch);

}  // namespace sgblend
