#include "pdfscope/pipeline/manifest.hpp"

#include <fstream>
#include <set>

#include "pdfscope/bytes.hpp"
#include "pdfscope/ml/dataset.hpp"

namespace pdfscope::pipeline {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::size_t DatasetManifest::count(int label) const {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.label == label;
  return n;
}

std::string label_name(int label) { return label == ml::kMalware ? "malware" : "benign"; }

std::optional<int> parse_label(std::string_view text) {
  if (text == "malware") return ml::kMalware;
  if (text == "benign") return ml::kBenign;
  return std::nullopt;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back().push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back().push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back().push_back(c);
    }
  }
  for (auto& f : fields) f = trim(f);
  return fields;
}

DatasetManifest ingest(const std::filesystem::path& manifest_csv) {
  std::ifstream in(manifest_csv);
  if (!in) throw DataError("cannot open manifest " + manifest_csv.string());
  const auto base = manifest_csv.parent_path();

  std::string line;
  if (!std::getline(in, line)) throw DataError("manifest is empty: " + manifest_csv.string());
  const auto header = split_csv_line(line);
  const bool has_report = header.size() == 3 && header[2] == "report_path";
  if (header.size() < 2 || header[0] != "path" || header[1] != "label" || (header.size() == 3 && !has_report) ||
      header.size() > 3) {
    throw DataError("manifest header must be path,label[,report_path]");
  }

  DatasetManifest manifest;
  std::set<std::string> seen;
  std::size_t line_no = 1;
  std::size_t data_rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++data_rows;
    const auto fields = split_csv_line(line);
    auto reject = [&](std::string reason) { manifest.rejects.push_back({line_no, std::move(reason)}); };
    if (fields.size() < 2 || fields.size() > header.size()) {
      reject("expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
      continue;
    }
    const auto label = parse_label(fields[1]);
    if (!label) {
      reject("unknown label \"" + fields[1] + "\" (expected malware or benign)");
      continue;
    }
    ManifestRow row;
    row.path = std::filesystem::path(fields[0]).is_absolute() ? std::filesystem::path(fields[0]) : base / fields[0];
    row.label = *label;
    if (fields.size() == 3 && !fields[2].empty()) {
      row.report_path =
          std::filesystem::path(fields[2]).is_absolute() ? std::filesystem::path(fields[2]) : base / fields[2];
    }
    try {
      row.hash = sha256_hex(read_file(row.path));
    } catch (const DataError& e) {
      reject(e.what());
      continue;
    }
    if (!seen.insert(row.hash).second) {
      manifest.warnings.push_back("line " + std::to_string(line_no) + ": " + row.path.string() +
                                  " duplicates earlier content " + row.hash.substr(0, 12) + "; skipped");
      continue;
    }
    manifest.rows.push_back(std::move(row));
  }
  if (manifest.rows.empty()) {
    throw DataError(data_rows == 0 ? "manifest has no rows" : "every manifest row was rejected");
  }
  return manifest;
}

}  // namespace pdfscope::pipeline
