#include "sgblend/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sgblend/rng.hpp"

namespace sgblend {
namespace {

void require_even_count(int n, const char* who) {
  if (n < 2) throw std::invalid_argument(std::string(who) + ": n must be >= 2");
  if (n % 2 != 0) throw std::invalid_argument(std::string(who) + ": n must be even");
}

// Rows are emitted interleaved (class 0, class 1, ...); noise is drawn per
// coordinate in row order so the layout is part of the determinism contract.
Dataset finish_two_class(Matrix&& X, double noise_sd, SplitMix64& rng) {
  for (std::size_t i = 0; i < X.rows(); ++i) {
    for (std::size_t j = 0; j < X.cols(); ++j) X(i, j) += noise_sd * rng.gaussian();
  }
  standardize_columns(X);
  Dataset ds;
  ds.X = std::move(X);
  ds.y.resize(ds.X.rows());
  for (std::size_t i = 0; i < ds.y.size(); ++i) ds.y[i] = static_cast<int>(i % 2);
  ds.n_classes = 2;
  return ds;
}

}  // namespace

Dataset two_moons(int n, double noise_sd, std::uint64_t seed) {
  require_even_count(n, "two_moons");
  if (noise_sd < 0.0) throw std::invalid_argument("two_moons: noise_sd must be >= 0");

  const int per_class = n / 2;
  Matrix X(static_cast<std::size_t>(n), 2);
  for (int i = 0; i < per_class; ++i) {
    const double t = per_class == 1
                         ? 0.0
                         : std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(per_class - 1);
    X(2 * static_cast<std::size_t>(i), 0) = std::cos(t);
    X(2 * static_cast<std::size_t>(i), 1) = std::sin(t);
    X(2 * static_cast<std::size_t>(i) + 1, 0) = 1.0 - std::cos(t);
    X(2 * static_cast<std::size_t>(i) + 1, 1) = 0.5 - std::sin(t);
  }
  SplitMix64 rng(seed);
  return finish_two_class(std::move(X), noise_sd, rng);
}

Dataset spirals(int n, int turns, double noise_sd, std::uint64_t seed) {
  require_even_count(n, "spirals");
  if (turns < 1) throw std::invalid_argument("spirals: turns must be >= 1");
  if (noise_sd < 0.0) throw std::invalid_argument("spirals: noise_sd must be >= 0");

  const int per_class = n / 2;
  Matrix X(static_cast<std::size_t>(n), 2);
  for (int i = 0; i < per_class; ++i) {
    const double t = per_class == 1
                         ? 0.0
                         : static_cast<double>(i) / static_cast<double>(per_class - 1);
    const double radius = 0.1 + 0.9 * t;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(turns) * t;
    X(2 * static_cast<std::size_t>(i), 0) = radius * std::cos(angle);
    X(2 * static_cast<std::size_t>(i), 1) = radius * std::sin(angle);
    X(2 * static_cast<std::size_t>(i) + 1, 0) = radius * std::cos(angle + std::numbers::pi);
    X(2 * static_cast<std::size_t>(i) + 1, 1) = radius * std::sin(angle + std::numbers::pi);
  }
  SplitMix64 rng(seed);
  return finish_two_class(std::move(X), noise_sd, rng);
}

Dataset gaussian_blobs(int n, int centers, double sd, std::uint64_t seed) {
  if (n < centers) throw std::invalid_argument("gaussian_blobs: n must be >= centers");
  if (centers < 2) throw std::invalid_argument("gaussian_blobs: need >= 2 centers");
  if (sd < 0.0) throw std::invalid_argument("gaussian_blobs: sd must be >= 0");

  Matrix X(static_cast<std::size_t>(n), 2);
  std::vector<int> y(static_cast<std::size_t>(n));
  SplitMix64 rng(seed);
  for (int i = 0; i < n; ++i) {
    const int c = i % centers;
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(c) / static_cast<double>(centers);
    X(static_cast<std::size_t>(i), 0) = 10.0 * std::cos(angle) + sd * rng.gaussian();
    X(static_cast<std::size_t>(i), 1) = 10.0 * std::sin(angle) + sd * rng.gaussian();
    y[static_cast<std::size_t>(i)] = c;
  }
  standardize_columns(X);
  Dataset ds;
  ds.X = std::move(X);
  ds.y = std::move(y);
  ds.n_classes = centers;
  return ds;
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void cell_error(std::size_t file_row, std::size_t col,
                             const std::string& what) {
  throw std::invalid_argument("load_csv: " + what + " at row " +
                              std::to_string(file_row) + ", column " +
                              std::to_string(col + 1));
}

double parse_real(const std::string& field, std::size_t file_row, std::size_t col) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) cell_error(file_row, col, "non-numeric cell");
  return value;
}

int parse_label(const std::string& field, std::size_t file_row, std::size_t col) {
  int value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || value < 0) {
    cell_error(file_row, col, "invalid label (want a non-negative integer)");
  }
  return value;
}

}  // namespace

Dataset load_csv(const std::string& path, int label_column, bool has_header) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_csv: cannot open '" + path + "'");

  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::string line;
  std::size_t file_row = 0;
  std::size_t n_cols = 0;
  while (std::getline(in, line)) {
    ++file_row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (has_header && file_row == 1) continue;
    if (line.empty()) continue;

    const std::vector<std::string> fields = split_fields(line);
    if (n_cols == 0) {
      n_cols = fields.size();
      if (label_column < 0 || static_cast<std::size_t>(label_column) >= n_cols) {
        throw std::invalid_argument("load_csv: label_column out of range");
      }
    } else if (fields.size() != n_cols) {
      throw std::invalid_argument("load_csv: row " + std::to_string(file_row) +
                                  " has " + std::to_string(fields.size()) +
                                  " fields, expected " + std::to_string(n_cols));
    }

    std::vector<double> features;
    features.reserve(n_cols - 1);
    for (std::size_t c = 0; c < fields.size(); ++c) {
      if (c == static_cast<std::size_t>(label_column)) {
        labels.push_back(parse_label(fields[c], file_row, c));
      } else {
        features.push_back(parse_real(fields[c], file_row, c));
      }
    }
    rows.push_back(std::move(features));
  }
  if (rows.empty()) throw std::invalid_argument("load_csv: no data rows in '" + path + "'");

  Dataset ds;
  ds.X = Matrix(rows.size(), n_cols - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j + 1 < n_cols; ++j) ds.X(i, j) = rows[i][j];
  }
  ds.y = std::move(labels);
  ds.n_classes = *std::max_element(ds.y.begin(), ds.y.end()) + 1;
  return ds;
}

std::pair<Dataset, Dataset> split(const Dataset& ds, double val_fraction,
                                  std::uint64_t seed) {
  if (!(val_fraction > 0.0 && val_fraction < 1.0)) {
    throw std::invalid_argument("split: val_fraction must be in (0, 1)");
  }
  const std::size_t n = ds.size();
  if (n < 2) throw std::invalid_argument("split: need at least 2 samples");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  SplitMix64 rng(seed);
  rng.shuffle(order);

  std::size_t n_val = static_cast<std::size_t>(
      std::llround(static_cast<double>(n) * val_fraction));
  n_val = std::min(std::max<std::size_t>(n_val, 1), n - 1);

  auto take = [&](std::size_t begin, std::size_t count, SplitTag tag) {
    Dataset out;
    out.X = Matrix(count, ds.X.cols());
    out.y.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const std::size_t src = order[begin + i];
      for (std::size_t j = 0; j < ds.X.cols(); ++j) out.X(i, j) = ds.X(src, j);
      out.y[i] = ds.y[src];
    }
    out.n_classes = ds.n_classes;
    out.split = tag;
    return out;
  };

  Dataset val = take(0, n_val, SplitTag::val);
  Dataset train = take(n_val, n - n_val, SplitTag::train);
  return {std::move(train), std::move(val)};
}

void standardize_columns(Matrix& m) {
  if (m.rows() == 0) return;
  const double inv_n = 1.0 / static_cast<double>(m.rows());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    double mean = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) mean += m(i, j);
    mean *= inv_n;
    double var = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const double d = m(i, j) - mean;
      var += d * d;
    }
    var *= inv_n;
    const double sd = std::sqrt(var);
    const double scale = sd > 1e-12 ? 1.0 / sd : 1.0;
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) = (m(i, j) - mean) * scale;
  }
}

}  // namespace sgblend
