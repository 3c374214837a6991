#include "fft.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace pdfscope::detail {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> aligned(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
  if (!p) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
  if (n == 0) throw std::invalid_argument("RealFft: zero length");
  auto in = aligned<double>(n);
  auto out = aligned<fftw_complex>(n / 2 + 1);
  std::lock_guard lock(planner_mutex());
  plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.get(), out.get(), FFTW_ESTIMATE);
  if (!plan_) throw std::runtime_error("fftw: r2c plan failed");
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan_);
}

void RealFft::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  if (in.size() != n_ || out.size() != bins()) throw std::invalid_argument("RealFft: bad buffer size");
  auto buf_in = aligned<double>(n_);
  auto buf_out = aligned<fftw_complex>(bins());
  std::copy(in.begin(), in.end(), buf_in.get());
  fftw_execute_dft_r2c(plan_, buf_in.get(), buf_out.get());
  for (std::size_t k = 0; k < bins(); ++k) out[k] = {buf_out[k][0], buf_out[k][1]};
}

ComplexFft2d::ComplexFft2d(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("ComplexFft2d: zero size");
  auto buf = aligned<fftw_complex>(rows * cols);
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf.get(), buf.get(),
                          FFTW_FORWARD, FFTW_ESTIMATE);
  inv_ = fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), buf.get(), buf.get(),
                          FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !inv_) throw std::runtime_error("fftw: 2-D plan failed");
}

ComplexFft2d::~ComplexFft2d() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(fwd_);
  fftw_destroy_plan(inv_);
}

void ComplexFft2d::run(fftw_plan plan, std::span<std::complex<double>> data) const {
  const std::size_t n = rows_ * cols_;
  if (data.size() != n) throw std::invalid_argument("ComplexFft2d: bad buffer size");
  auto buf = aligned<fftw_complex>(n);
  for (std::size_t i = 0; i < n; ++i) {
    buf[i][0] = data[i].real();
    buf[i][1] = data[i].imag();
  }
  fftw_execute_dft(plan, buf.get(), buf.get());
  for (std::size_t i = 0; i < n; ++i) data[i] = {buf[i][0], buf[i][1]};
}

void ComplexFft2d::forward(std::span<std::complex<double>> data) const { run(fwd_, data); }

void ComplexFft2d::inverse(std::span<std::complex<double>> data) const {
  run(inv_, data);
  const double scale = 1.0 / static_cast<double>(rows_ * cols_);
  for (auto& v : data) v *= scale;
}

}  // namespace pdfscope::detail
