#include "pdfscope/binary/audio.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fft.hpp"
#include "pdfscope/binary/dct.hpp"

namespace pdfscope::binary {
namespace {

constexpr double kMelLinearStep = 200.0 / 3.0;
constexpr double kMelBreakHz = 1000.0;
constexpr double kMelBreak = kMelBreakHz / kMelLinearStep;  // 15
const double kMelLogStep = std::log(6.4) / 27.0;

}  // namespace

AudioSignal byte_signal(ByteView data) {
  if (data.empty()) throw DataError("empty stream");
  AudioSignal sig;
  sig.samples.reserve(std::max(data.size(), AudioConfig::kFrame));
  for (auto b : data) sig.samples.push_back((static_cast<double>(b) - 128.0) / 128.0);
  if (sig.samples.size() < AudioConfig::kFrame) sig.samples.resize(AudioConfig::kFrame, 0.0);
  return sig;
}

double hz_to_mel(double hz) {
  if (hz < kMelBreakHz) return hz / kMelLinearStep;
  return kMelBreak + std::log(hz / kMelBreakHz) / kMelLogStep;
}

double mel_to_hz(double mel) {
  if (mel < kMelBreak) return mel * kMelLinearStep;
  return kMelBreakHz * std::exp(kMelLogStep * (mel - kMelBreak));
}

const AudioAnalyzer& AudioAnalyzer::standard() {
  static const AudioAnalyzer analyzer;
  return analyzer;
}

AudioAnalyzer::AudioAnalyzer() {
  constexpr std::size_t n = AudioConfig::kFrame;
  constexpr std::size_t bins = n / 2 + 1;
  constexpr double rate = AudioConfig::kSampleRate;

  window_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    window_[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
  }

  std::vector<double> bin_hz(bins);
  for (std::size_t k = 0; k < bins; ++k) bin_hz[k] = static_cast<double>(k) * rate / n;

  constexpr std::size_t bands = AudioConfig::kMelBands;
  const double mel_lo = hz_to_mel(0.0);
  const double mel_hi = hz_to_mel(rate / 2.0);
  std::vector<double> edges(bands + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    edges[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (bands + 1));
  }
  mel_.assign(bands * bins, 0.0);
  for (std::size_t m = 0; m < bands; ++m) {
    const double norm = 2.0 / (edges[m + 2] - edges[m]);
    for (std::size_t k = 0; k < bins; ++k) {
      const double rising = (bin_hz[k] - edges[m]) / (edges[m + 1] - edges[m]);
      const double falling = (edges[m + 2] - bin_hz[k]) / (edges[m + 2] - edges[m + 1]);
      mel_[m * bins + k] = std::max(0.0, std::min(rising, falling)) * norm;
    }
  }

  chroma_map_.assign(bins, -1);
  for (std::size_t k = 1; k < bins; ++k) {
    const auto semis = std::lround(12.0 * std::log2(bin_hz[k] / AudioConfig::kReferencePitch));
    chroma_map_[k] = static_cast<int>(((semis + 9) % 12 + 12) % 12);
  }

  const Dct dct(bands);
  cepstral_basis_.resize(AudioConfig::kMfcc * bands);
  for (std::size_t c = 0; c < AudioConfig::kMfcc; ++c) {
    for (std::size_t m = 0; m < bands; ++m) cepstral_basis_[c * bands + m] = dct.basis(c, m);
  }

  fft_ = std::make_unique<detail::RealFft>(n);
}

AudioAnalyzer::~AudioAnalyzer() = default;

std::size_t AudioAnalyzer::frame_count(std::size_t samples) const {
  if (samples < AudioConfig::kFrame) return 0;
  return 1 + (samples - AudioConfig::kFrame) / AudioConfig::kHop;
}

std::vector<double> AudioAnalyzer::power_spectrum(std::span<const double> frame) const {
  if (frame.size() != AudioConfig::kFrame) throw UsageError("audio frame must be 2048 samples");
  std::vector<double> windowed(frame.size());
  for (std::size_t i = 0; i < frame.size(); ++i) windowed[i] = frame[i] * window_[i];
  std::vector<std::complex<double>> spectrum(fft_->bins());
  fft_->forward(windowed, spectrum);
  std::vector<double> power(spectrum.size());
  std::transform(spectrum.begin(), spectrum.end(), power.begin(),
                 [](const std::complex<double>& z) { return std::norm(z); });
  return power;
}

std::vector<double> AudioAnalyzer::mel_from_power(std::span<const double> power) const {
  const std::size_t bins = power.size();
  std::vector<double> mel(AudioConfig::kMelBands, 0.0);
  for (std::size_t m = 0; m < mel.size(); ++m) {
    const double* row = &mel_[m * bins];
    double acc = 0.0;
    for (std::size_t k = 0; k < bins; ++k) acc += row[k] * power[k];
    mel[m] = acc;
  }
  return mel;
}

std::vector<double> AudioAnalyzer::mfcc_from_mel(std::span<const double> mel) const {
  std::vector<double> logmel(mel.size());
  std::transform(mel.begin(), mel.end(), logmel.begin(),
                 [](double p) { return std::log(std::max(p, AudioConfig::kLogFloor)); });
  std::vector<double> out(AudioConfig::kMfcc, 0.0);
  for (std::size_t c = 0; c < out.size(); ++c) {
    double acc = 0.0;
    for (std::size_t m = 0; m < logmel.size(); ++m) acc += cepstral_basis_[c * logmel.size() + m] * logmel[m];
    out[c] = acc;
  }
  return out;
}

std::vector<double> AudioAnalyzer::chroma_from_power(std::span<const double> power) const {
  std::vector<double> classes(AudioConfig::kChroma, 0.0);
  for (std::size_t k = 0; k < power.size(); ++k) {
    if (chroma_map_[k] >= 0) classes[static_cast<std::size_t>(chroma_map_[k])] += power[k];
  }
  double norm = 0.0;
  for (double c : classes) norm += c * c;
  norm = std::sqrt(norm);
  for (double& c : classes) c = norm > 0.0 ? c / norm : 0.0;
  return classes;
}

std::vector<double> AudioAnalyzer::mel_frame(std::span<const double> frame) const {
  return mel_from_power(power_spectrum(frame));
}

std::vector<double> AudioAnalyzer::mfcc_frame(std::span<const double> frame) const {
  return mfcc_from_mel(mel_frame(frame));
}

std::vector<double> AudioAnalyzer::chroma_frame(std::span<const double> frame) const {
  return chroma_from_power(power_spectrum(frame));
}

template <typename FrameFn>
std::vector<double> AudioAnalyzer::frame_mean(const AudioSignal& sig, std::size_t dims, FrameFn fn) const {
  const std::size_t frames = frame_count(sig.samples.size());
  if (frames == 0) throw UsageError("audio signal shorter than one frame");
  std::vector<double> mean(dims, 0.0);
  const std::span<const double> samples(sig.samples);
  for (std::size_t f = 0; f < frames; ++f) {
    const auto values = fn(samples.subspan(f * AudioConfig::kHop, AudioConfig::kFrame));
    for (std::size_t i = 0; i < dims; ++i) mean[i] += values[i];
  }
  for (double& m : mean) m /= static_cast<double>(frames);
  return mean;
}

FeatureVector AudioAnalyzer::melspectrogram(const AudioSignal& sig) const {
  return {FeatureKind::kMelSpectrogram,
          frame_mean(sig, AudioConfig::kMelBands, [this](auto frame) { return mel_frame(frame); })};
}

FeatureVector AudioAnalyzer::mfcc(const AudioSignal& sig) const {
  return {FeatureKind::kMfcc,
          frame_mean(sig, AudioConfig::kMfcc, [this](auto frame) { return mfcc_frame(frame); })};
}

FeatureVector AudioAnalyzer::chroma(const AudioSignal& sig) const {
  return {FeatureKind::kChroma,
          frame_mean(sig, AudioConfig::kChroma, [this](auto frame) { return chroma_frame(frame); })};
}

FeatureVector melspectrogram(const AudioSignal& sig) { return AudioAnalyzer::standard().melspectrogram(sig); }
FeatureVector mfcc(const AudioSignal& sig) { return AudioAnalyzer::standard().mfcc(sig); }
FeatureVector chroma(const AudioSignal& sig) { return AudioAnalyzer::standard().chroma(sig); }

}  // namespace pdfscope::binary
