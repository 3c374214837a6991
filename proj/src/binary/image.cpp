#include "pdfscope/binary/image.hpp"

#include <algorithm>
#include <cmath>

#include "pdfscope/binary/dct.hpp"

namespace pdfscope::binary {
namespace {

// Footprint of one target cell: source cells [first, first + weights.size()).
struct Footprint {
  std::size_t first = 0;
  std::vector<double> weights;
};

std::vector<Footprint> area_footprints(std::size_t src, std::size_t dst) {
  std::vector<Footprint> out(dst);
  const double scale = static_cast<double>(src) / static_cast<double>(dst);
  for (std::size_t t = 0; t < dst; ++t) {
    const double lo = static_cast<double>(t) * scale;
    const double hi = static_cast<double>(t + 1) * scale;
    const auto first = static_cast<std::size_t>(std::floor(lo));
    const auto last = std::min(src, static_cast<std::size_t>(std::ceil(hi)));
    out[t].first = first;
    for (std::size_t s = first; s < last; ++s) {
      const double overlap =
          std::min(hi, static_cast<double>(s + 1)) - std::max(lo, static_cast<double>(s));
      out[t].weights.push_back(std::max(overlap, 0.0) / scale);
    }
  }
  return out;
}

}  // namespace

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<double> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) throw UsageError("GrayImage: zero area");
  if (pixels_.size() != width * height) throw UsageError("GrayImage: pixel count mismatch");
  for (double p : pixels_) {
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) throw UsageError("GrayImage: intensity outside [0,1]");
  }
}

GrayImage GrayImage::resampled(std::size_t width, std::size_t height) const {
  if (empty()) throw UsageError("GrayImage: cannot resample empty image");
  if (width == width_ && height == height_) return *this;
  const auto fx = area_footprints(width_, width);
  const auto fy = area_footprints(height_, height);
  // Horizontal pass then vertical pass.
  std::vector<double> horiz(height_ * width, 0.0);
  for (std::size_t y = 0; y < height_; ++y) {
    const double* row = &pixels_[y * width_];
    for (std::size_t t = 0; t < width; ++t) {
      double acc = 0.0;
      for (std::size_t j = 0; j < fx[t].weights.size(); ++j) acc += fx[t].weights[j] * row[fx[t].first + j];
      horiz[y * width + t] = acc;
    }
  }
  std::vector<double> out(height * width, 0.0);
  for (std::size_t t = 0; t < height; ++t) {
    for (std::size_t j = 0; j < fy[t].weights.size(); ++j) {
      const double w = fy[t].weights[j];
      const double* src = &horiz[(fy[t].first + j) * width];
      for (std::size_t x = 0; x < width; ++x) out[t * width + x] += w * src[x];
    }
  }
  for (double& p : out) p = std::clamp(p, 0.0, 1.0);
  return GrayImage(width, height, std::move(out));
}

std::size_t byteplot_width(std::size_t size) {
  struct Step {
    std::size_t below;
    std::size_t width;
  };
  static constexpr Step kSchedule[] = {
      {10'000, 32}, {30'000, 64}, {60'000, 128}, {100'000, 256},
      {200'000, 384}, {500'000, 512}, {1'000'000, 768},
  };
  for (const auto& step : kSchedule) {
    if (size < step.below) return step.width;
  }
  return 1024;
}

GrayImage byteplot_image(ByteView data) {
  if (data.empty()) throw DataError("empty stream");
  const std::size_t width = byteplot_width(data.size());
  const std::size_t height = (data.size() + width - 1) / width;
  std::vector<double> pixels(width * height, 0.0);
  std::transform(data.begin(), data.end(), pixels.begin(),
                 [](std::uint8_t b) { return static_cast<double>(b) / 255.0; });
  return GrayImage(width, height, std::move(pixels));
}

BigramCounts bigram_counts(ByteView data) {
  if (data.size() < 2) throw DataError("insufficient bytes for bigrams");
  BigramCounts counts(256 * 256, 0.0);
  for (std::size_t i = 0; i + 1 < data.size(); ++i) counts[data[i] * 256u + data[i + 1]] += 1.0;
  return counts;
}

GrayImage bigram_dct_from_counts(std::span<const double> counts) {
  if (counts.size() != 256 * 256) throw UsageError("bigram matrix must be 256x256");
  std::vector<double> logged(counts.size());
  std::transform(counts.begin(), counts.end(), logged.begin(), [](double c) {
    if (c < 0) throw UsageError("negative bigram count");
    return std::log1p(c);
  });
  auto coeffs = dct2d(logged, 256, 256);
  for (double& c : coeffs) c = std::fabs(c);
  const auto [lo_it, hi_it] = std::minmax_element(coeffs.begin(), coeffs.end());
  const double lo = *lo_it;
  const double range = *hi_it - lo;
  for (double& c : coeffs) c = range > 0 ? (c - lo) / range : 0.0;
  return GrayImage(256, 256, std::move(coeffs));
}

GrayImage bigram_dct_image(ByteView data) { return bigram_dct_from_counts(bigram_counts(data)); }

}  // namespace pdfscope::binary
