#pragma once

// Thin FFTW wrappers. Plans are built once (under a global lock, FFTW's
// planner is not re-entrant) and executed on per-call aligned buffers, so
// a const wrapper can be shared between threads.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <span>

namespace pdfscope::detail {

class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const { return n_; }
  std::size_t bins() const { return n_ / 2 + 1; }

  /// Unnormalised forward DFT of `in` (length n) into `out` (n/2+1 bins).
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

 private:
  std::size_t n_;
  fftw_plan plan_ = nullptr;
};

class ComplexFft2d {
 public:
  ComplexFft2d(std::size_t rows, std::size_t cols);
  ~ComplexFft2d();
  ComplexFft2d(const ComplexFft2d&) = delete;
  ComplexFft2d& operator=(const ComplexFft2d&) = delete;

  /// In-place unnormalised transforms on a row-major rows*cols buffer.
  void forward(std::span<std::complex<double>> data) const;
  /// Inverse, scaled by 1/(rows*cols).
  void inverse(std::span<std::complex<double>> data) const;

 private:
  void run(fftw_plan plan, std::span<std::complex<double>> data) const;

  std::size_t rows_;
  std::size_t cols_;
  fftw_plan fwd_ = nullptr;
  fftw_plan inv_ = nullptr;
};

}  // namespace pdfscope::detail
