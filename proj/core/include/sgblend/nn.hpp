#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sgblend/activations.hpp"
#include "sgblend/matrix.hpp"
#include "sgblend/params.hpp"

namespace sgblend {

// One dense layer, y = act(x W + b), with a per-layer ParamStore for kinds
// that carry learnable activation parameters.
struct DenseLayer {
  Matrix W;                // in_dim x out_dim
  std::vector<double> b;   // out_dim
  Matrix dW;
  std::vector<double> db;
  ActivationKind kind = ActivationKind::identity;
  GeluVariant blend_gelu = GeluVariant::tanh_approx;
  ParamStore params;

  // caches from the last forward pass, consumed by backward
  Matrix x_cache;
  Matrix z_cache;
  bool has_forward_cache = false;

  DenseLayer() = default;
  DenseLayer(std::size_t in_dim, std::size_t out_dim, ActivationKind k);

  std::size_t in_dim() const { return W.rows(); }
  std::size_t out_dim() const { return W.cols(); }

  Matrix forward(const Matrix& x);

  // Accumulates dW, db and the activation-parameter gradients, then returns
  // dx. Parameter gradients are summed over the batch; the 1/batch scaling
  // lives in the loss gradient. Throws std::logic_error if no forward pass
  // has populated the caches.
  Matrix backward(const Matrix& dy);

  void zero_grads();
};

// View of one parameter tensor for the optimizers. weight_decay is set for
// weights and biases, never for activation parameters.
struct ParamSlot {
  std::span<double> value;
  std::span<double> grad;
  bool weight_decay = false;
};

struct MlpModel {
  std::vector<DenseLayer> layers;

  Matrix forward(const Matrix& x);
  Matrix backward(const Matrix& dy);
  // argmax class per row; ties break toward the lower index
  std::vector<int> predict(const Matrix& x) const;
  void zero_grads();

  // Forward pass that leaves training caches untouched. Returns each
  // layer's post-activation output; the last entry is the logits.
  std::vector<Matrix> activations(const Matrix& x) const;

  // Slots in a fixed order: per layer W, b, then alpha_raw / beta_raw /
  // gamma where the kind has them. Spans point into this model's storage.
  std::vector<ParamSlot> param_slots();

  bool all_finite() const;
  std::size_t in_dim() const { return layers.front().in_dim(); }
  std::size_t out_dim() const { return layers.back().out_dim(); }
};

// in_dim -> hidden... -> n_classes, hidden layers using `kind`, final layer
// linear. Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero,
// drawn row-major per layer from SplitMix64(seed).
MlpModel make_mlp(std::size_t in_dim, const std::vector<int>& hidden,
                  std::size_t n_classes, ActivationKind kind,
                  GeluVariant blend_gelu, std::uint64_t seed);

// Mean cross-entropy over rows with log-sum-exp stabilization.
// dlogits = (softmax - onehot) / batch_size.
std::pair<double, Matrix> softmax_cross_entropy(const Matrix& logits,
                                                std::span<const int> labels);

std::vector<int> argmax_rows(const Matrix& logits);

}  // namespace sgblend
