#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pdfscope {

enum class FeatureKind {
  kByteplotGist,
  kBigramDctGist,
  kMfcc,
  kChroma,
  kMelSpectrogram,
  kSsdeep,
  kStructural,
  kApiCalls,
  kFused,
};

/// Canonical kind names ("byteplot-gist", "mfcc", ...). Part of the cache
/// file contract, so never rename.
std::string_view kind_name(FeatureKind kind);
std::optional<FeatureKind> parse_kind(std::string_view name);

/// Fixed dimensionality of a kind. apicalls depends on the fitted
/// vocabulary and fused on its parts, so both return nullopt.
std::optional<std::size_t> kind_dims(FeatureKind kind);

/// Static kinds computed from the PDF bytes alone.
const std::vector<FeatureKind>& static_kinds();

struct FeatureVector {
  FeatureKind kind{};
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

/// Throws UsageError if the vector's length breaks its kind's contract or
/// any value is non-finite.
void check_feature(const FeatureVector& v);

}  // namespace pdfscope
