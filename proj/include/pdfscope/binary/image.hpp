#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "pdfscope/bytes.hpp"

namespace pdfscope::binary {

/// Row-major grayscale image with intensities in [0, 1].
class GrayImage {
 public:
  GrayImage() = default;
  /// Throws UsageError on zero area, size mismatch, or out-of-range pixels.
  GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  bool empty() const { return pixels_.empty(); }
  std::span<const double> pixels() const { return pixels_; }
  double at(std::size_t x, std::size_t y) const { return pixels_[y * width_ + x]; }

  /// Area-averaging resample; each output pixel is the overlap-weighted
  /// mean of the input pixels its footprint covers.
  GrayImage resampled(std::size_t width, std::size_t height) const;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<double> pixels_;
};

/// Byteplot row width for a file of `size` bytes (thresholds in units of
/// 1000 bytes: <10 -> 32, <30 -> 64, <60 -> 128, <100 -> 256, <200 -> 384,
/// <500 -> 512, <1000 -> 768, else 1024).
std::size_t byteplot_width(std::size_t size);

/// One pixel per byte (value/255), rows of byteplot_width, last row
/// zero-padded. Throws DataError("empty stream") on empty input.
GrayImage byteplot_image(ByteView data);

using BigramCounts = std::vector<double>;  // 256*256, row = first byte

/// Counts of consecutive byte pairs. Throws DataError when size < 2.
BigramCounts bigram_counts(ByteView data);

/// log(1+count) -> orthonormal 2-D DCT-II -> |.| -> min-max to [0,1].
/// A constant magnitude matrix maps to all zeros.
GrayImage bigram_dct_from_counts(std::span<const double> counts);

GrayImage bigram_dct_image(ByteView data);

}  // namespace pdfscope::binary
