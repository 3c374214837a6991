#pragma once

#include <cstdint>
#include <string>

#include "pdfscope/bytes.hpp"
#include "pdfscope/feature.hpp"

namespace pdfscope::binary {

/// Context-triggered piecewise hash in the spamsum/ssdeep format.
struct FuzzyHash {
  std::uint32_t block_size = 3;
  std::string digest1;  // <= 64 chars at block_size
  std::string digest2;  // <= 32 chars at 2 * block_size

  /// "block_size:digest1:digest2"
  std::string to_string() const;

  friend bool operator==(const FuzzyHash&, const FuzzyHash&) = default;
};

inline constexpr std::size_t kSpamsumLength = 64;
inline constexpr std::uint32_t kMinBlockSize = 3;

/// Computes the spamsum digest in one pass over the data, tracking every
/// candidate block size at once instead of re-hashing on each retry.
FuzzyHash ssdeep_digest(ByteView data);

/// Code points of to_string(), truncated or zero-padded to 40 values.
FeatureVector hash_feature(const FuzzyHash& hash);

}  // namespace pdfscope::binary
