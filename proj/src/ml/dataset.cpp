#include "pdfscope/ml/dataset.hpp"

#include <cmath>
#include <limits>

#include "pdfscope/bytes.hpp"

namespace pdfscope::ml {

void Matrix::push_row(std::span<const double> values) {
  if (rows_ == 0 && data_.empty()) cols_ = values.size();
  if (values.size() != cols_) throw UsageError("Matrix: row length mismatch");
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= rows_) throw UsageError("Matrix: row index out of range");
    auto src = row(indices[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

LabeledSet LabeledSet::subset(std::span<const std::size_t> indices) const {
  LabeledSet out{x.select_rows(indices), {}, kind};
  out.y.reserve(indices.size());
  for (auto i : indices) out.y.push_back(y.at(i));
  return out;
}

void validate(const LabeledSet& data, bool require_both_classes) {
  if (data.x.rows() != data.y.size()) throw UsageError("labeled set: row/label count mismatch");
  if (data.y.size() < 2) throw UsageError("labeled set needs at least 2 samples");
  bool seen[2] = {false, false};
  for (int label : data.y) {
    if (label != kBenign && label != kMalware) throw UsageError("labels must be 0 (benign) or 1 (malware)");
    seen[label] = true;
  }
  if (require_both_classes && !(seen[0] && seen[1])) throw UsageError("training data must contain both classes");
  if (auto d = kind_dims(data.kind); d && *d != data.dims()) {
    throw UsageError(std::string(kind_name(data.kind)) + " data must have " + std::to_string(*d) + " columns");
  }
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  if (n == 0) throw UsageError("uniform_index: empty range");
  const std::uint64_t bound = n;
  const std::uint64_t reject_below = (0 - bound) % bound;  // 2^64 mod n
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= reject_below) return static_cast<std::size_t>(x % bound);
  }
}

Standardizer::Standardizer(std::vector<double> mean, std::vector<double> stddev)
    : mean_(std::move(mean)), stddev_(std::move(stddev)) {
  if (mean_.size() != stddev_.size()) throw UsageError("Standardizer: size mismatch");
}

Standardizer Standardizer::fit(const Matrix& x) {
  if (x.rows() == 0) throw UsageError("Standardizer: no rows");
  const std::size_t d = x.cols();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c);
  }
  for (double& m : mean) m /= static_cast<double>(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      const double dev = x(r, c) - mean[c];
      sd[c] += dev * dev;
    }
  }
  for (std::size_t c = 0; c < d; ++c) {
    sd[c] = std::sqrt(sd[c] / static_cast<double>(x.rows()));
    // Spread at rounding level of the mean is a constant column.
    if (sd[c] <= 1e-12 * std::max(1.0, std::fabs(mean[c]))) sd[c] = 0.0;
  }
  return Standardizer(std::move(mean), std::move(sd));
}

std::vector<double> Standardizer::transform(std::span<const double> row) const {
  if (row.size() != mean_.size()) throw UsageError("Standardizer: dimension mismatch");
  std::vector<double> out(row.size());
  for (std::size_t c = 0; c < row.size(); ++c) {
    out[c] = stddev_[c] > 0.0 ? (row[c] - mean_[c]) / stddev_[c] : 0.0;
  }
  return out;
}

Matrix Standardizer::transform(const Matrix& x) const {
  Matrix out(x.rows(), x.cols());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto t = transform(x.row(r));
    std::copy(t.begin(), t.end(), out.row(r).begin());
  }
  return out;
}

double accuracy(std::span<const int> predicted, std::span<const int> truth) {
  if (predicted.size() != truth.size()) throw UsageError("accuracy: length mismatch");
  if (predicted.empty()) throw UsageError("accuracy: no samples");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == truth[i];
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

}  // namespace pdfscope::ml
