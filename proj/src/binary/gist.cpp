#include "pdfscope/binary/gist.hpp"

#include <cmath>
#include <numbers>

#include "fft.hpp"

namespace pdfscope::binary {
namespace {

double wrap_angle(double a) {
  constexpr double pi = std::numbers::pi;
  while (a > pi) a -= 2 * pi;
  while (a < -pi) a += 2 * pi;
  return a;
}

// DFT index -> signed frequency.
double signed_freq(std::size_t i, std::size_t n) {
  return i < n / 2 ? static_cast<double>(i) : static_cast<double>(i) - static_cast<double>(n);
}

}  // namespace

const GaborBank& GaborBank::standard() {
  static const GaborBank bank(kSide, {8, 8, 4});
  return bank;
}

GaborBank::GaborBank(std::size_t side, std::vector<std::size_t> orientations_per_scale)
    : side_(side), orientations_(std::move(orientations_per_scale)) {
  if (side < 4 || side % 2 != 0) throw UsageError("GaborBank: side must be even and >= 4");
  constexpr double pi = std::numbers::pi;
  const auto n = static_cast<double>(side);
  for (std::size_t scale = 0; scale < orientations_.size(); ++scale) {
    const auto count = orientations_[scale];
    if (count == 0) throw UsageError("GaborBank: scale without orientations");
    const double centre = 0.3 / std::pow(1.85, static_cast<double>(scale));
    const double bandwidth = 16.0 * static_cast<double>(count * count) / (32.0 * 32.0);
    for (std::size_t k = 0; k < count; ++k) {
      const double rotation = pi * static_cast<double>(k) / static_cast<double>(count);
      std::vector<double> g(side * side, 0.0);
      for (std::size_t v = 0; v < side; ++v) {
        for (std::size_t u = 0; u < side; ++u) {
          if (u == side / 2 || v == side / 2 || (u == 0 && v == 0)) continue;
          const double fx = signed_freq(u, side);
          const double fy = signed_freq(v, side);
          const double r = std::hypot(fx, fy);
          const double theta = wrap_angle(std::atan2(fy, fx) + rotation);
          const double radial = r / n / centre - 1.0;
          g[v * side + u] = std::exp(-10.0 * 0.35 * radial * radial - 2.0 * bandwidth * pi * theta * theta);
        }
      }
      filters_.push_back(std::move(g));
    }
  }
  fft_ = std::make_unique<detail::ComplexFft2d>(side, side);
}

GaborBank::~GaborBank() = default;

std::vector<std::complex<double>> GaborBank::response(std::span<const double> image,
                                                       std::size_t index) const {
  if (image.size() != side_ * side_) throw UsageError("GaborBank: image size mismatch");
  if (index >= filters_.size()) throw UsageError("GaborBank: filter index out of range");
  std::vector<std::complex<double>> spectrum(image.begin(), image.end());
  fft_->forward(spectrum);
  const auto& g = filters_[index];
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= g[i];
  fft_->inverse(spectrum);
  return spectrum;
}

std::vector<double> GaborBank::descriptor(std::span<const double> image, std::size_t grid) const {
  if (image.size() != side_ * side_) throw UsageError("GaborBank: image size mismatch");
  if (grid == 0 || side_ % grid != 0) throw UsageError("GaborBank: grid must divide side");
  std::vector<std::complex<double>> spectrum(image.begin(), image.end());
  fft_->forward(spectrum);

  const std::size_t cell = side_ / grid;
  const double cell_area = static_cast<double>(cell * cell);
  std::vector<double> out;
  out.reserve(filters_.size() * grid * grid);
  std::vector<std::complex<double>> filtered(spectrum.size());
  for (const auto& g : filters_) {
    for (std::size_t i = 0; i < spectrum.size(); ++i) filtered[i] = spectrum[i] * g[i];
    fft_->inverse(filtered);
    for (std::size_t gy = 0; gy < grid; ++gy) {
      for (std::size_t gx = 0; gx < grid; ++gx) {
        double acc = 0.0;
        for (std::size_t y = gy * cell; y < (gy + 1) * cell; ++y) {
          for (std::size_t x = gx * cell; x < (gx + 1) * cell; ++x) acc += std::abs(filtered[y * side_ + x]);
        }
        out.push_back(acc / cell_area);
      }
    }
  }
  return out;
}

FeatureVector gist(const GrayImage& image, FeatureKind kind) {
  if (kind != FeatureKind::kByteplotGist && kind != FeatureKind::kBigramDctGist) {
    throw UsageError("gist: kind must be byteplot-gist or bigramdct-gist");
  }
  if (image.empty()) throw DataError("gist: degenerate image");
  const auto& bank = GaborBank::standard();
  const auto small = image.resampled(bank.side(), bank.side());
  return FeatureVector{kind, bank.descriptor(small.pixels(), GaborBank::kGrid)};
}

}  // namespace pdfscope::binary
