#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pdfscope/binary/image.hpp"
#include "pdfscope/feature.hpp"

namespace pdfscope::detail {
class ComplexFft2d;
}

namespace pdfscope::binary {

/// Frequency-domain Gabor filter bank of the GIST descriptor.
///
/// Filter (scale s, orientation k of n_s) at frequency (fx, fy), in cycles
/// per image of side N:
///   G = exp(-3.5 (r / (N f_s) - 1)^2 - 2 pi b_s (wrap(theta + pi k / n_s))^2)
/// with r = |(fx, fy)|, theta = atan2(fy, fx), f_s = 0.3 / 1.85^s and
/// b_s = n_s^2 / 64. The DC bin and the Nyquist row/column are zeroed, so
/// every filter rejects constants and mirrored orientations (k, n_s - k)
/// are exact reflections of each other.
class GaborBank {
 public:
  static constexpr std::size_t kSide = 64;
  static constexpr std::size_t kGrid = 4;

  /// The standard 3-scale bank with 8, 8, 4 orientations (20 filters).
  static const GaborBank& standard();

  GaborBank(std::size_t side, std::vector<std::size_t> orientations_per_scale);
  ~GaborBank();
  GaborBank(const GaborBank&) = delete;
  GaborBank& operator=(const GaborBank&) = delete;

  std::size_t side() const { return side_; }
  std::size_t filter_count() const { return filters_.size(); }
  std::span<const std::size_t> orientations() const { return orientations_; }

  /// Transfer function of filter `index`, row-major over DFT indices
  /// (row = fy index, col = fx index, unshifted).
  std::span<const double> transfer(std::size_t index) const { return filters_[index]; }

  /// Complex response of a side*side image to filter `index` (circular).
  std::vector<std::complex<double>> response(std::span<const double> image, std::size_t index) const;

  /// Mean |response| per grid cell for every filter, in (filter, cell)
  /// order with cells row-major. Image must be side*side.
  std::vector<double> descriptor(std::span<const double> image, std::size_t grid) const;

 private:
  std::size_t side_;
  std::vector<std::size_t> orientations_;
  std::vector<std::vector<double>> filters_;
  std::unique_ptr<detail::ComplexFft2d> fft_;
};

/// 320-d GIST: resample to 64x64 (area averaging), filter with the standard
/// bank, average magnitudes over a 4x4 grid. `kind` is byteplot-gist or
/// bigramdct-gist.
FeatureVector gist(const GrayImage& image, FeatureKind kind);

}  // namespace pdfscope::binary
