#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdfscope/bytes.hpp"
#include "pdfscope/feature.hpp"

/// Byte-level PDF keyword scanner. No object-model parse and no stream
/// decompression: anything inside /FlateDecode or /ObjStm payloads is
/// invisible here.
namespace pdfscope::tokenizer {

bool is_pdf_whitespace(std::uint8_t c);
bool is_pdf_delimiter(std::uint8_t c);
inline bool is_regular(std::uint8_t c) { return !is_pdf_whitespace(c) && !is_pdf_delimiter(c); }

/// Ordered tag list; the position of a tag is its feature index.
class TagVocabulary {
 public:
  /// The 25 tags of the structural feature, in feature order.
  static const TagVocabulary& standard();

  /// Throws UsageError on duplicates or empty tags.
  explicit TagVocabulary(std::vector<std::string> tags);

  std::span<const std::string> tags() const { return tags_; }
  std::size_t size() const { return tags_.size(); }
  std::optional<std::size_t> index_of(std::string_view tag) const;

 private:
  std::vector<std::string> tags_;
};

struct KeywordCounts {
  std::map<std::string, std::uint64_t, std::less<>> counts;
  std::size_t total_bytes = 0;

  /// Count for `tag`; throws UsageError if the tag is not a key.
  std::uint64_t at(std::string_view tag) const;
};

/// One `/`-initiated name token. `offset`/`length` cover the raw bytes
/// including the slash; `name` is the text after the slash, with #xx
/// escapes decoded when scanned with decode_escapes.
struct NameToken {
  std::size_t offset = 0;
  std::size_t length = 0;
  std::string name;
};

std::vector<NameToken> scan_names(ByteView data, bool decode_escapes);

/// Replaces #xx escapes inside name tokens with the byte they encode.
/// Malformed escapes and everything outside names pass through.
Bytes normalize_names(ByteView data);

/// Counts every vocabulary tag. `/`-tags match whole name tokens exactly
/// (case-sensitive); bare keywords match as substrings, except that an
/// occurrence lying inside a longer bare vocabulary keyword (obj inside
/// endobj, xref inside startxref) is credited only to the longer one.
/// Expects normalize_names output; escapes are not decoded again.
KeywordCounts count_keywords(ByteView data, const TagVocabulary& vocab = TagVocabulary::standard());

/// 25-d (or |vocab|-d) "structural" feature, entry i = count of tag i.
FeatureVector keyword_feature(const KeywordCounts& counts,
                              const TagVocabulary& vocab = TagVocabulary::standard());

/// normalize_names -> count_keywords -> keyword_feature.
FeatureVector structural_feature(ByteView data);

}  // namespace pdfscope::tokenizer
