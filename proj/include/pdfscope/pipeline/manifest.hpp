#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pdfscope::pipeline {

struct ManifestRow {
  std::filesystem::path path;
  std::string hash;  // SHA-256 of the file bytes
  int label = 0;     // ml::kBenign / ml::kMalware
  std::optional<std::filesystem::path> report_path;
};

struct RejectedRow {
  std::size_t line = 0;  // 1-based line in the CSV
  std::string reason;
};

struct DatasetManifest {
  std::vector<ManifestRow> rows;
  std::vector<RejectedRow> rejects;
  std::vector<std::string> warnings;

  std::size_t count(int label) const;
};

std::string label_name(int label);                      // "benign" / "malware"
std::optional<int> parse_label(std::string_view text);  // inverse of label_name

/// Reads a CSV with header `path,label[,report_path]`. Relative paths are
/// resolved against the manifest's directory. Bad rows are collected in
/// `rejects`; rows whose content duplicates an earlier row are dropped with
/// a warning. Throws DataError when the file cannot be read, the header is
/// wrong, or every row is rejected.
DatasetManifest ingest(const std::filesystem::path& manifest_csv);

/// Splits one CSV record (double-quoted fields with "" escapes allowed).
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace pdfscope::pipeline
