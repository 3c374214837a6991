#include "pdfscope/pipeline/report.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>

#include "json.hpp"
#include "pdfscope/bytes.hpp"
#include "pdfscope/pipeline/cache.hpp"
#include "pdfscope/pipeline/manifest.hpp"

namespace pdfscope::pipeline {
namespace {

using nlohmann::json;

constexpr std::array<ml::ModelKind, 3> kModels = {ml::ModelKind::kKnn, ml::ModelKind::kRf, ml::ModelKind::kVec};

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt4(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

struct Row {
  std::string features;
  std::vector<int> order;  // kind indices, for sorting
  std::size_t dims = 0;
  std::uint64_t seed = 0;
  std::array<std::optional<double>, 3> acc;
};

std::vector<int> kind_order(const std::string& features) {
  std::vector<int> out;
  for (FeatureKind k : parse_kinds(features)) out.push_back(static_cast<int>(k));
  return out;
}

std::vector<Row> build_rows(std::vector<ml::CvReport> reports) {
  std::vector<Row> rows;
  for (const auto& r : reports) {
    const auto m = static_cast<std::size_t>(
        std::find(kModels.begin(), kModels.end(), r.model) - kModels.begin());
    auto it = std::find_if(rows.begin(), rows.end(), [&](const Row& row) {
      return row.features == r.features && row.dims == r.dims && row.seed == r.seed && !row.acc[m];
    });
    if (it == rows.end()) {
      rows.push_back(Row{r.features, kind_order(r.features), r.dims, r.seed, {}});
      it = rows.end() - 1;
    }
    it->acc[m] = r.mean_accuracy;
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.order != b.order) return a.order < b.order;
    return a.seed < b.seed;
  });
  return rows;
}

}  // namespace

std::string report_to_json(const ml::CvReport& report) {
  json j;
  j["model"] = std::string(ml::model_name(report.model));
  j["features"] = report.features;
  j["dims"] = report.dims;
  j["seed"] = report.seed;
  j["folds"] = report.fold_accuracy.size();
  j["fold_accuracy"] = report.fold_accuracy;
  j["mean_accuracy"] = report.mean_accuracy;
  return j.dump(2) + "\n";
}

ml::CvReport report_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError("run file is not JSON (byte " + std::to_string(e.byte) + ")");
  }
  try {
    ml::CvReport r;
    const auto model = ml::parse_model(j.at("model").get<std::string>());
    if (!model) throw DataError("unknown model " + j.at("model").get<std::string>());
    r.model = *model;
    r.features = j.at("features").get<std::string>();
    kind_order(r.features);  // validates the kind list
    r.dims = j.at("dims").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.fold_accuracy = j.at("fold_accuracy").get<std::vector<double>>();
    r.mean_accuracy = j.at("mean_accuracy").get<double>();
    if (j.contains("folds") && j["folds"].get<std::size_t>() != r.fold_accuracy.size()) {
      throw DataError("fold count does not match fold_accuracy");
    }
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("bad run file: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("bad run file: ") + e.what());
  }
}

std::vector<ml::CvReport> load_reports(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw DataError("not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<ml::CvReport> out;
  for (const auto& f : files) {
    try {
      out.push_back(report_from_json(to_string(read_file(f))));
    } catch (const DataError& e) {
      throw DataError(f.string() + ": " + e.what());
    }
  }
  if (out.empty()) throw DataError("no run files (*.json) in " + dir.string());
  return out;
}

std::string emit_report(std::vector<ml::CvReport> reports, ReportFormat format) {
  const auto rows = build_rows(std::move(reports));
  std::ostringstream out;
  if (format == ReportFormat::kCsv) {
    out << "feature,dims,seed,knn,rf,vec\n";
    for (const auto& r : rows) {
      out << '"' << r.features << "\"," << r.dims << ',' << r.seed;
      for (const auto& a : r.acc) out << ',' << (a ? fmt17(*a) : "");
      out << '\n';
    }
    return out.str();
  }

  std::vector<std::array<std::string, 6>> cells;
  cells.push_back({"feature", "dims", "seed", "knn", "rf", "vec"});
  for (const auto& r : rows) {
    std::array<std::string, 6> c{r.features, std::to_string(r.dims), std::to_string(r.seed), "", "", ""};
    for (std::size_t m = 0; m < 3; ++m) c[3 + m] = r.acc[m] ? fmt4(*r.acc[m]) : "-";
    cells.push_back(std::move(c));
  }
  std::array<std::size_t, 6> width{};
  for (const auto& c : cells)
    for (std::size_t i = 0; i < 6; ++i) width[i] = std::max(width[i], c[i].size());
  for (std::size_t n = 0; n < cells.size(); ++n) {
    std::string line;
    for (std::size_t i = 0; i < 6; ++i) {
      const auto& s = cells[n][i];
      const auto pad = std::string(width[i] - s.size(), ' ');
      line += i == 0 ? s + pad : "  " + pad + s;
    }
    out << line << '\n';
    if (n == 0) {
      std::size_t total = 0;
      for (auto w : width) total += w;
      out << std::string(total + 10, '-') << '\n';
    }
  }
  return out.str();
}

std::vector<ml::CvReport> parse_report_csv(std::string_view csv) {
  std::vector<ml::CvReport> out;
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "feature,dims,seed,knn,rf,vec") throw DataError("unexpected report header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 6) throw DataError("report row needs 6 fields: " + line);
    try {
      for (std::size_t m = 0; m < 3; ++m) {
        if (f[3 + m].empty()) continue;
        ml::CvReport r;
        r.model = kModels[m];
        r.features = f[0];
        r.dims = std::stoull(f[1]);
        r.seed = std::stoull(f[2]);
        r.mean_accuracy = std::stod(f[3 + m]);
        out.push_back(std::move(r));
      }
    } catch (const std::logic_error&) {
      throw DataError("bad number in report row: " + line);
    }
  }
  return out;
}

}  // namespace pdfscope::pipeline
