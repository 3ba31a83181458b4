#include "sgblend/nn.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sgblend/rng.hpp"

namespace sgblend {

DenseLayer::DenseLayer(std::size_t in_dim, std::size_t out_dim, ActivationKind k)
    : W(in_dim, out_dim),
      b(out_dim, 0.0),
      dW(in_dim, out_dim),
      db(out_dim, 0.0),
      kind(k) {}

Matrix DenseLayer::forward(const Matrix& x) {
  if (x.cols() != in_dim()) {
    throw std::invalid_argument("DenseLayer::forward: input has " +
                                std::to_string(x.cols()) + " columns, expected " +
                                std::to_string(in_dim()));
  }
  Matrix z = matmul(x, W);
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) += b[j];
  }
  x_cache = x;
  z_cache = z;
  has_forward_cache = true;

  const ActivationParams p = constrained(params);
  Matrix y(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i) {
    for (std::size_t j = 0; j < z.cols(); ++j) {
      y(i, j) = sgblend::forward(kind, p, z(i, j), blend_gelu);
    }
  }
  return y;
}

Matrix DenseLayer::backward(const Matrix& dy) {
  if (!has_forward_cache) {
    throw std::logic_error("DenseLayer::backward called before forward");
  }
  if (dy.rows() != z_cache.rows() || dy.cols() != z_cache.cols()) {
    throw std::invalid_argument("DenseLayer::backward: dy shape mismatch");
  }

  // Parameters cannot have changed since the forward pass within a training
  // step, so the constrained values here match the ones used there.
  const ActivationParams p = constrained(params);

  Matrix dz(dy.rows(), dy.cols());
  for (std::size_t i = 0; i < dy.rows(); ++i) {
    for (std::size_t j = 0; j < dy.cols(); ++j) {
      dz(i, j) = dy(i, j) * d_input(kind, p, z_cache(i, j), blend_gelu);
    }
  }

  if (has_alpha(kind)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dy.rows(); ++i) {
      for (std::size_t j = 0; j < dy.cols(); ++j) {
        sum += dy(i, j) * d_alpha_sgblend(p, z_cache(i, j), blend_gelu);
      }
    }
    chain_alpha_grad(params, sum);
  }
  if (has_beta(kind)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dy.rows(); ++i) {
      for (std::size_t j = 0; j < dy.cols(); ++j) {
        sum += dy(i, j) * d_beta_sswish(p.beta, z_cache(i, j));
      }
    }
    params.d_beta += kind == ActivationKind::sgblend ? p.alpha * sum : sum;
  }
  if (has_gamma(kind)) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dy.rows(); ++i) {
      for (std::size_t j = 0; j < dy.cols(); ++j) sum += dy(i, j);
    }
    params.d_gamma += kind == ActivationKind::sgblend ? -p.alpha * sum : -sum;
  }

  Matrix dw_batch = matmul_at_b(x_cache, dz);
  for (std::size_t i = 0; i < dW.rows(); ++i) {
    for (std::size_t j = 0; j < dW.cols(); ++j) dW(i, j) += dw_batch(i, j);
  }
  const std::vector<double> db_batch = column_sums(dz);
  for (std::size_t j = 0; j < db.size(); ++j) db[j] += db_batch[j];

  return matmul_a_bt(dz, W);
}

void DenseLayer::zero_grads() {
  dW.fill(0.0);
  std::fill(db.begin(), db.end(), 0.0);
  zero_param_grads(params);
}

Matrix MlpModel::forward(const Matrix& x) {
  Matrix out = x;
  for (DenseLayer& layer : layers) out = layer.forward(out);
  return out;
}

Matrix MlpModel::backward(const Matrix& dy) {
  Matrix d = dy;
  for (auto it = layers.rbegin(); it != layers.rend(); ++it) d = it->backward(d);
  return d;
}

std::vector<int> MlpModel::predict(const Matrix& x) const {
  return argmax_rows(activations(x).back());
}

void MlpModel::zero_grads() {
  for (DenseLayer& layer : layers) layer.zero_grads();
}

std::vector<Matrix> MlpModel::activations(const Matrix& x) const {
  std::vector<Matrix> outs;
  outs.reserve(layers.size());
  Matrix cur = x;
  for (const DenseLayer& layer : layers) {
    Matrix z = matmul(cur, layer.W);
    for (std::size_t i = 0; i < z.rows(); ++i) {
      for (std::size_t j = 0; j < z.cols(); ++j) z(i, j) += layer.b[j];
    }
    const ActivationParams p = constrained(layer.params);
    for (double& v : z.data()) v = sgblend::forward(layer.kind, p, v, layer.blend_gelu);
    outs.push_back(z);
    cur = outs.back();
  }
  return outs;
}

std::vector<ParamSlot> MlpModel::param_slots() {
  std::vector<ParamSlot> slots;
  for (DenseLayer& layer : layers) {
    slots.push_back({layer.W.data(), layer.dW.data(), true});
    slots.push_back({std::span<double>(layer.b), std::span<double>(layer.db), true});
    if (has_alpha(layer.kind)) {
      slots.push_back({std::span<double>(&layer.params.alpha_raw, 1),
                       std::span<double>(&layer.params.d_alpha_raw, 1), false});
    }
    if (has_beta(layer.kind)) {
      slots.push_back({std::span<double>(&layer.params.beta_raw, 1),
                       std::span<double>(&layer.params.d_beta, 1), false});
    }
    if (has_gamma(layer.kind)) {
      slots.push_back({std::span<double>(&layer.params.gamma, 1),
                       std::span<double>(&layer.params.d_gamma, 1), false});
    }
  }
  return slots;
}

bool MlpModel::all_finite() const {
  for (const DenseLayer& layer : layers) {
    if (!layer.W.all_finite()) return false;
    for (double v : layer.b) {
      if (!std::isfinite(v)) return false;
    }
    const ParamStore& s = layer.params;
    for (double v : {s.alpha_raw, s.beta_raw, s.gamma}) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

MlpModel make_mlp(std::size_t in_dim, const std::vector<int>& hidden,
                  std::size_t n_classes, ActivationKind kind,
                  GeluVariant blend_gelu, std::uint64_t seed) {
  if (n_classes < 2) throw std::invalid_argument("make_mlp: need at least 2 classes");
  for (int h : hidden) {
    if (h < 1) throw std::invalid_argument("make_mlp: hidden sizes must be >= 1");
  }

  std::vector<std::size_t> dims;
  dims.push_back(in_dim);
  for (int h : hidden) dims.push_back(static_cast<std::size_t>(h));
  dims.push_back(n_classes);

  SplitMix64 rng(seed);
  MlpModel model;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const bool last = l + 2 == dims.size();
    DenseLayer layer(dims[l], dims[l + 1], last ? ActivationKind::identity : kind);
    layer.blend_gelu = blend_gelu;
    const double bound = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    for (double& w : layer.W.data()) w = rng.uniform(-bound, bound);
    model.layers.push_back(std::move(layer));
  }
  return model;
}

std::pair<double, Matrix> softmax_cross_entropy(const Matrix& logits,
                                                std::span<const int> labels) {
  if (logits.rows() != labels.size()) {
    throw std::invalid_argument("softmax_cross_entropy: batch size mismatch");
  }
  if (logits.rows() == 0) {
    throw std::invalid_argument("softmax_cross_entropy: empty batch");
  }
  const std::size_t n = logits.rows();
  const std::size_t c = logits.cols();
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= c) {
      throw std::invalid_argument("softmax_cross_entropy: label " +
                                  std::to_string(labels[i]) + " out of range at row " +
                                  std::to_string(i));
    }
  }

  Matrix dlogits(n, c);
  double loss = 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    double m = logits(i, 0);
    for (std::size_t j = 1; j < c; ++j) m = std::max(m, logits(i, j));
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) sum += std::exp(logits(i, j) - m);
    const double lse = m + std::log(sum);
    loss += lse - logits(i, static_cast<std::size_t>(labels[i]));
    for (std::size_t j = 0; j < c; ++j) {
      const double soft = std::exp(logits(i, j) - lse);
      dlogits(i, j) = (soft - (static_cast<std::size_t>(labels[i]) == j ? 1.0 : 0.0)) * inv_n;
    }
  }
  return {loss * inv_n, std::move(dlogits)};
}

std::vector<int> argmax_rows(const Matrix& logits) {
  std::vector<int> out(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < logits.cols(); ++j) {
      if (logits(i, j) > logits(i, best)) best = j;
    }
    out[i] = static_cast<int>(best);
  }
  return out;
}

}  // namespace sgblend
