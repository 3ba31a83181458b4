#include "sgblend/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sgblend {

double accuracy(std::span<const int> preds, std::span<const int> labels) {
  if (preds.empty()) throw std::invalid_argument("accuracy: empty input");
  if (preds.size() != labels.size()) {
    throw std::invalid_argument("accuracy: size mismatch");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (preds[i] == labels[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

double f1_binary(std::span<const int> preds, std::span<const int> labels,
                 int positive_class) {
  if (preds.empty()) throw std::invalid_argument("f1_binary: empty input");
  if (preds.size() != labels.size()) {
    throw std::invalid_argument("f1_binary: size mismatch");
  }
  if (positive_class != 0 && positive_class != 1) {
    throw std::invalid_argument("f1_binary: positive_class must be 0 or 1");
  }
  for (int y : labels) {
    if (y != 0 && y != 1) {
      throw std::invalid_argument("f1_binary: labels must be binary");
    }
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool pred_pos = preds[i] == positive_class;
    const bool label_pos = labels[i] == positive_class;
    if (pred_pos && label_pos) ++tp;
    if (pred_pos && !label_pos) ++fp;
    if (!pred_pos && label_pos) ++fn;
  }
  const double denom = static_cast<double>(2 * tp + fp + fn);
  if (denom == 0.0) return 0.0;
  return 2.0 * static_cast<double>(tp) / denom;
}

double dead_neuron_pct(const Matrix& post_activations, double eps) {
  if (post_activations.empty()) {
    throw std::invalid_argument("dead_neuron_pct: empty matrix");
  }
  if (eps < 0.0) throw std::invalid_argument("dead_neuron_pct: eps must be >= 0");
  std::size_t dead = 0;
  for (std::size_t j = 0; j < post_activations.cols(); ++j) {
    bool all_zero = true;
    for (std::size_t i = 0; i < post_activations.rows(); ++i) {
      if (std::fabs(post_activations(i, j)) > eps) {
        all_zero = false;
        break;
      }
    }
    if (all_zero) ++dead;
  }
  return 100.0 * static_cast<double>(dead) /
         static_cast<double>(post_activations.cols());
}

}  // namespace sgblend
