#include "pdfscope/binary/dct.hpp"

#include <cmath>
#include <numbers>

#include "pdfscope/bytes.hpp"

namespace pdfscope::binary {

Dct::Dct(std::size_t n) : n_(n), basis_(n * n) {
  if (n == 0) throw UsageError("Dct: zero length");
  const double a0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ak = std::sqrt(2.0 / static_cast<double>(n));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double angle = std::numbers::pi * static_cast<double>((2 * i + 1) * k) / (2.0 * n);
      basis_[k * n + i] = (k == 0 ? a0 : ak) * std::cos(angle);
    }
  }
}

void Dct::forward(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) throw UsageError("Dct: length mismatch");
  forward_truncated(in, out);
}

void Dct::forward_truncated(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() > n_) throw UsageError("Dct: length mismatch");
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double* row = &basis_[k * n_];
    double acc = 0.0;
    for (std::size_t i = 0; i < n_; ++i) acc += row[i] * in[i];
    out[k] = acc;
  }
}

void Dct::inverse(std::span<const double> in, std::span<double> out) const {
  if (in.size() != n_ || out.size() != n_) throw UsageError("Dct: length mismatch");
  for (std::size_t i = 0; i < n_; ++i) out[i] = 0.0;
  for (std::size_t k = 0; k < n_; ++k) {
    const double* row = &basis_[k * n_];
    const double c = in[k];
    for (std::size_t i = 0; i < n_; ++i) out[i] += row[i] * c;
  }
}

namespace {

// out = op(rows of data) then op(columns); op = forward or inverse.
template <bool Forward>
std::vector<double> separable(std::span<const double> data, std::size_t rows, std::size_t cols) {
  if (data.size() != rows * cols) throw UsageError("dct2d: size mismatch");
  const Dct row_dct(cols);
  const Dct col_dct(rows);
  std::vector<double> tmp(rows * cols);
  for (std::size_t r = 0; r < rows; ++r) {
    auto in = data.subspan(r * cols, cols);
    std::span<double> out(&tmp[r * cols], cols);
    if constexpr (Forward) row_dct.forward(in, out); else row_dct.inverse(in, out);
  }
  std::vector<double> column(rows), transformed(rows), result(rows * cols);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) column[r] = tmp[r * cols + c];
    if constexpr (Forward) col_dct.forward(column, transformed); else col_dct.inverse(column, transformed);
    for (std::size_t r = 0; r < rows; ++r) result[r * cols + c] = transformed[r];
  }
  return result;
}

}  // namespace

std::vector<double> dct2d(std::span<const double> data, std::size_t rows, std::size_t cols) {
  return separable<true>(data, rows, cols);
}

std::vector<double> idct2d(std::span<const double> data, std::size_t rows, std::size_t cols) {
  return separable<false>(data, rows, cols);
}

}  // namespace pdfscope::binary
