#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdfscope/bytes.hpp"
#include "pdfscope/dynamic.hpp"
#include "pdfscope/feature.hpp"
#include "pdfscope/pipeline/manifest.hpp"

namespace pdfscope::pipeline {

/// Computes one static feature from PDF bytes.
FeatureVector compute_static_feature(FeatureKind kind, ByteView data);

/// Version tag stored with cached values; bump when a featurizer's output
/// changes so stale entries are recomputed.
std::string featurizer_version(FeatureKind kind);

/// Feature store keyed by (content hash, kind), persisted as one file per
/// kind:
///   <kind>.tsv         "# pdfscope-cache kind=<k> version=<v> dims=<d>" then
///                      "hash<TAB>v1<TAB>...<TAB>vD" rows, sorted by hash
///   apicalls.tsv       rows "hash<TAB>api|status|count<TAB>..." (sparse)
///   <kind>.errors.tsv  "hash<TAB>message" for samples the featurizer rejected
/// Values are written with 17 significant digits and read back exactly.
class FeatureCache {
 public:
  FeatureCache() = default;
  explicit FeatureCache(std::filesystem::path dir);

  /// Loads every cache file found in the directory; entries written by a
  /// different featurizer version are discarded.
  static FeatureCache open(const std::filesystem::path& dir);
  void save() const;

  const std::filesystem::path& dir() const { return dir_; }

  /// A value is stored (dense vector or call counts).
  bool has(const std::string& hash, FeatureKind kind) const;
  /// A value or a recorded error is stored; featurize_all skips these.
  bool known(const std::string& hash, FeatureKind kind) const;
  const std::vector<double>* dense(const std::string& hash, FeatureKind kind) const;
  const dynamic::CallCounts* calls(const std::string& hash) const;
  const std::string* error(const std::string& hash, FeatureKind kind) const;

  void put(const std::string& hash, FeatureKind kind, std::vector<double> values);
  void put_calls(const std::string& hash, dynamic::CallCounts counts);
  void put_error(const std::string& hash, FeatureKind kind, std::string message);

  std::vector<FeatureKind> kinds() const;
  std::size_t size(FeatureKind kind) const;

 private:
  struct KindStore {
    std::map<std::string, std::vector<double>> dense;
    std::map<std::string, dynamic::CallCounts> calls;
    std::map<std::string, std::string> errors;
  };

  std::filesystem::path dir_;
  std::map<FeatureKind, KindStore> stores_;
};

struct FeaturizeStats {
  std::size_t computed = 0;
  std::size_t reused = 0;
  std::size_t failed = 0;  // newly recorded errors
  std::vector<std::string> messages;
};

/// Fills `cache` for every (sample, kind) pair not yet present. Work fans
/// out over `threads` workers (0 = hardware concurrency); results are
/// merged by a single writer in manifest order, so the cache contents do
/// not depend on scheduling. apicalls needs a report_path per row; rows
/// without one get an error entry.
FeaturizeStats featurize_all(const DatasetManifest& manifest, std::span<const FeatureKind> kinds,
                             FeatureCache& cache, unsigned threads = 0);

/// Parses "a,b,c" into kinds; throws UsageError on unknown names.
std::vector<FeatureKind> parse_kinds(std::string_view list);

}  // namespace pdfscope::pipeline
