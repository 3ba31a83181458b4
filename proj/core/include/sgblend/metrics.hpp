#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sgblend/matrix.hpp"

namespace sgblend {

// One row of a training trajectory.
struct EpochMetrics {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_accuracy = 0.0;
  std::optional<double> val_f1;          // binary tasks only
  std::vector<double> dead_neuron_pct;   // one entry per hidden layer
  double dead_pct_overall = 0.0;         // unit-weighted across hidden layers
  double lr = 0.0;
  double wall_time_seconds = 0.0;
};

double accuracy(std::span<const int> preds, std::span<const int> labels);

// 2 * precision * recall / (precision + recall); 0 when the denominator is
// 0. Labels must all be 0 or 1.
double f1_binary(std::span<const int> preds, std::span<const int> labels,
                 int positive_class);

// Percentage of units (columns) whose activation magnitude is <= eps for
// every sample in the batch.
double dead_neuron_pct(const Matrix& post_activations, double eps = 0.0);

}  // namespace sgblend
