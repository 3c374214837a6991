#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pdfscope::binary {

/// Orthonormal DCT-II of length n via a precomputed basis matrix.
/// basis(k, i) = a_k cos(pi (2i+1) k / 2n), a_0 = sqrt(1/n), a_k = sqrt(2/n).
class Dct {
 public:
  explicit Dct(std::size_t n);

  std::size_t size() const { return n_; }
  double basis(std::size_t k, std::size_t i) const { return basis_[k * n_ + i]; }

  void forward(std::span<const double> in, std::span<double> out) const;
  /// Orthonormal DCT-III, the inverse of forward.
  void inverse(std::span<const double> in, std::span<double> out) const;

  /// Only the first out.size() coefficients of forward.
  void forward_truncated(std::span<const double> in, std::span<double> out) const;

 private:
  std::size_t n_;
  std::vector<double> basis_;
};

/// Separable orthonormal 2-D DCT-II of a row-major rows*cols matrix.
std::vector<double> dct2d(std::span<const double> data, std::size_t rows, std::size_t cols);
std::vector<double> idct2d(std::span<const double> data, std::size_t rows, std::size_t cols);

}  // namespace pdfscope::binary
