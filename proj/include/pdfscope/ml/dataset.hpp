#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pdfscope/feature.hpp"

namespace pdfscope::ml {

inline constexpr int kBenign = 0;
inline constexpr int kMalware = 1;

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  std::span<const double> data() const { return data_; }

  /// Appends a row; the first row fixes the column count.
  void push_row(std::span<const double> values);
  Matrix select_rows(std::span<const std::size_t> indices) const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LabeledSet {
  Matrix x;
  std::vector<int> y;  // kBenign / kMalware
  FeatureKind kind = FeatureKind::kFused;

  std::size_t size() const { return y.size(); }
  std::size_t dims() const { return x.cols(); }
  LabeledSet subset(std::span<const std::size_t> indices) const;
};

/// Throws UsageError unless rows == labels, N >= 2, labels are 0/1 and
/// (when require_both_classes) both classes occur.
void validate(const LabeledSet& data, bool require_both_classes);

/// Uniform integer in [0, n) by rejection over the raw 64-bit engine
/// output; unlike std::uniform_int_distribution the sequence is identical
/// on every standard library.
std::size_t uniform_index(std::mt19937_64& rng, std::size_t n);

/// Per-dimension z-score with statistics from one sample set; dimensions
/// with zero variance map to 0.
class Standardizer {
 public:
  Standardizer() = default;
  Standardizer(std::vector<double> mean, std::vector<double> stddev);

  static Standardizer fit(const Matrix& x);

  std::size_t dims() const { return mean_.size(); }
  std::span<const double> mean() const { return mean_; }
  std::span<const double> stddev() const { return stddev_; }

  std::vector<double> transform(std::span<const double> row) const;
  Matrix transform(const Matrix& x) const;

  friend bool operator==(const Standardizer&, const Standardizer&) = default;

 private:
  std::vector<double> mean_;
  std::vector<double> stddev_;
};

double accuracy(std::span<const int> predicted, std::span<const int> truth);

}  // namespace pdfscope::ml
