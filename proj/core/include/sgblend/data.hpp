#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgblend/matrix.hpp"

namespace sgblend {

enum class SplitTag { full, train, val };

struct Dataset {
  Matrix X;            // samples x features
  std::vector<int> y;  // class indices in [0, n_classes)
  int n_classes = 0;
  SplitTag split = SplitTag::full;

  std::size_t size() const { return y.size(); }
  std::size_t features() const { return X.cols(); }
};

// Synthetic generators. All are bitwise deterministic per seed (SplitMix64
// with a fixed draw order) and standardize features to zero mean / unit
// variance per column after generation. Class rows are interleaved:
// even rows class 0, odd rows class 1 (blobs cycle round-robin).

// n/2 points per half-circle; arc 0 is (cos t, sin t) and arc 1 is
// (1 - cos t, 0.5 - sin t) for t uniform on [0, pi], plus isotropic
// Gaussian noise of the given standard deviation. n must be even and >= 2.
Dataset two_moons(int n, double noise_sd, std::uint64_t seed);

// Two interleaved spiral arms offset by half a turn, radius growing from
// 0.1 to 1.0 over `turns` full rotations. The hard non-monotonicity
// stressor. n must be even and >= 2; turns >= 1.
Dataset spirals(int n, int turns, double noise_sd, std::uint64_t seed);

// `centers` isotropic Gaussian clusters placed evenly on a circle of radius
// 10, one class per cluster.
Dataset gaussian_blobs(int n, int centers, double sd, std::uint64_t seed);

// CSV: comma separated, '.' decimal point, optional single header row,
// labels non-negative integers. Features keep their column order with the
// label column (0-based index) removed. Loaded data is not standardized.
// Parse failures name the 1-based file row and column.
Dataset load_csv(const std::string& path, int label_column, bool has_header);

// Deterministic shuffled split; the first round(n * val_fraction) shuffled
// rows (clamped to [1, n-1]) become the validation set.
std::pair<Dataset, Dataset> split(const Dataset& ds, double val_fraction,
                                  std::uint64_t seed);

// Zero mean, unit variance per column (population variance). Columns with
// near-zero variance are only centered.
void standardize_columns(Matrix& m);

}  // namespace sgblend
