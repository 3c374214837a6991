#include "pdfscope/feature.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "pdfscope/bytes.hpp"

namespace pdfscope {
namespace {

struct KindInfo {
  FeatureKind kind;
  std::string_view name;
  std::size_t dims;  // 0 = variable
};

constexpr std::array<KindInfo, 9> kKinds{{
    {FeatureKind::kByteplotGist, "byteplot-gist", 320},
    {FeatureKind::kBigramDctGist, "bigramdct-gist", 320},
    {FeatureKind::kMfcc, "mfcc", 20},
    {FeatureKind::kChroma, "chroma", 12},
    {FeatureKind::kMelSpectrogram, "melspectrogram", 128},
    {FeatureKind::kSsdeep, "ssdeep", 40},
    {FeatureKind::kStructural, "structural", 25},
    {FeatureKind::kApiCalls, "apicalls", 0},
    {FeatureKind::kFused, "fused", 0},
}};

const KindInfo& info(FeatureKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k;
  }
  throw UsageError("unknown feature kind");
}

}  // namespace

std::string_view kind_name(FeatureKind kind) { return info(kind).name; }

std::optional<FeatureKind> parse_kind(std::string_view name) {
  for (const auto& k : kKinds) {
    if (k.name == name) return k.kind;
  }
  return std::nullopt;
}

std::optional<std::size_t> kind_dims(FeatureKind kind) {
  const auto d = info(kind).dims;
  if (d == 0) return std::nullopt;
  return d;
}

const std::vector<FeatureKind>& static_kinds() {
  static const std::vector<FeatureKind> kinds{
      FeatureKind::kByteplotGist, FeatureKind::kBigramDctGist, FeatureKind::kMfcc,
      FeatureKind::kChroma,       FeatureKind::kMelSpectrogram, FeatureKind::kSsdeep,
      FeatureKind::kStructural,
  };
  return kinds;
}

void check_feature(const FeatureVector& v) {
  if (auto d = kind_dims(v.kind); d && *d != v.values.size()) {
    throw UsageError(std::string(kind_name(v.kind)) + ": expected " + std::to_string(*d) +
                     " values, got " + std::to_string(v.values.size()));
  }
  for (double x : v.values) {
    if (!std::isfinite(x)) throw UsageError(std::string(kind_name(v.kind)) + ": non-finite value");
  }
}

}  // namespace pdfscope
