#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdfscope/bytes.hpp"
#include "pdfscope/feature.hpp"

/// API-call-status bag-of-words over saved sandbox reports.
///
/// Report layout (JSON, other keys ignored):
///   { "behavior": { "processes": [ { "calls": [ {"api": "NtOpenFile", "status": 1}, ... ] } ] } }
/// Calls are flattened across processes in document order.
namespace pdfscope::dynamic {

struct ApiCall {
  std::string api;
  int status = 0;  // 0 or 1

  friend auto operator<=>(const ApiCall&, const ApiCall&) = default;
};

struct ApiReport {
  std::string sample_id;  // SHA-256 of the report bytes
  std::vector<ApiCall> calls;
};

/// Multiplicity of each (api, status) pair in one or more reports.
using CallCounts = std::map<ApiCall, std::uint64_t>;

/// Throws DataError carrying the byte offset when the text is not valid
/// JSON, or the JSON path when a call entry is malformed. A missing
/// behavior section is an empty report, not an error.
ApiReport parse_report(const ByteStream& file);

CallCounts count_calls(const ApiReport& report);

struct VocabEntry {
  ApiCall call;
  std::uint64_t count = 0;  // corpus total at fit time
};

class ApiVocabulary {
 public:
  ApiVocabulary() = default;
  /// Throws UsageError on duplicate (api, status) pairs.
  explicit ApiVocabulary(std::vector<VocabEntry> entries);

  std::span<const VocabEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  /// SHA-256 over the ordered "api<TAB>status" lines.
  const std::string& version() const { return version_; }
  std::optional<std::size_t> index_of(const ApiCall& call) const;

  /// Lines "api<TAB>status<TAB>count".
  std::string to_text() const;
  static ApiVocabulary from_text(std::string_view text);

 private:
  std::vector<VocabEntry> entries_;
  std::string version_;
  std::map<ApiCall, std::size_t> index_;
};

/// All distinct pairs, ordered by descending corpus count, then api name,
/// then status. `max_entries` keeps only the head of that order.
/// Throws DataError on an empty corpus.
ApiVocabulary build_api_vocabulary(std::span<const CallCounts> corpus,
                                   std::optional<std::size_t> max_entries = std::nullopt);
ApiVocabulary build_api_vocabulary(std::span<const ApiReport> reports,
                                   std::optional<std::size_t> max_entries = std::nullopt);

/// Entry i = occurrences of vocabulary pair i; out-of-vocabulary calls are
/// dropped.
FeatureVector api_call_feature(const CallCounts& counts, const ApiVocabulary& vocab);
FeatureVector api_call_feature(const ApiReport& report, const ApiVocabulary& vocab);

}  // namespace pdfscope::dynamic
