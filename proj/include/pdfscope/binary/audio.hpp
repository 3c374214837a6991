#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "pdfscope/bytes.hpp"
#include "pdfscope/feature.hpp"

namespace pdfscope::detail {
class RealFft;
}

namespace pdfscope::binary {

struct AudioConfig {
  static constexpr double kSampleRate = 22050.0;
  static constexpr std::size_t kFrame = 2048;
  static constexpr std::size_t kHop = 512;
  static constexpr std::size_t kMelBands = 128;
  static constexpr std::size_t kMfcc = 20;
  static constexpr std::size_t kChroma = 12;
  static constexpr double kLogFloor = 1e-10;
  static constexpr double kReferencePitch = 440.0;  // A4, pitch class 9 (C = 0)
};

struct AudioSignal {
  std::vector<double> samples;
  double nominal_rate = AudioConfig::kSampleRate;
};

/// Byte b -> (b - 128) / 128, zero-padded to at least one frame.
/// Throws DataError on empty input.
AudioSignal byte_signal(ByteView data);

/// Slaney-style mel scale (linear below 1 kHz, logarithmic above).
double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Shared, read-only analysis state: Hann window, mel filterbank, chroma
/// bin map, cepstral DCT and FFT plan. Safe to use from several threads.
class AudioAnalyzer {
 public:
  static const AudioAnalyzer& standard();

  AudioAnalyzer();
  ~AudioAnalyzer();
  AudioAnalyzer(const AudioAnalyzer&) = delete;
  AudioAnalyzer& operator=(const AudioAnalyzer&) = delete;

  std::span<const double> window() const { return window_; }
  /// Row-major kMelBands x (kFrame/2 + 1) triangular filters, each scaled
  /// by 2 / (upper edge - lower edge) in Hz.
  std::span<const double> mel_filterbank() const { return mel_; }
  /// Pitch class of every FFT bin; -1 for the DC bin.
  std::span<const int> chroma_map() const { return chroma_map_; }

  std::size_t frame_count(std::size_t samples) const;

  /// |DFT|^2 of one Hann-windowed frame (kFrame samples).
  std::vector<double> power_spectrum(std::span<const double> frame) const;
  /// Mel band powers of one frame.
  std::vector<double> mel_frame(std::span<const double> frame) const;
  std::vector<double> mfcc_frame(std::span<const double> frame) const;
  std::vector<double> chroma_frame(std::span<const double> frame) const;

  FeatureVector melspectrogram(const AudioSignal& sig) const;
  FeatureVector mfcc(const AudioSignal& sig) const;
  FeatureVector chroma(const AudioSignal& sig) const;

 private:
  std::vector<double> mel_from_power(std::span<const double> power) const;
  std::vector<double> mfcc_from_mel(std::span<const double> mel) const;
  std::vector<double> chroma_from_power(std::span<const double> power) const;

  template <typename FrameFn>
  std::vector<double> frame_mean(const AudioSignal& sig, std::size_t dims, FrameFn fn) const;

  std::vector<double> window_;
  std::vector<double> mel_;
  std::vector<int> chroma_map_;
  std::vector<double> cepstral_basis_;  // kMfcc x kMelBands
  std::unique_ptr<detail::RealFft> fft_;
};

FeatureVector melspectrogram(const AudioSignal& sig);
FeatureVector mfcc(const AudioSignal& sig);
FeatureVector chroma(const AudioSignal& sig);

}  // namespace pdfscope::binary
