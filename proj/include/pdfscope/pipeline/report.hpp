#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "pdfscope/ml/cv.hpp"

namespace pdfscope::pipeline {

/// One CV run as a JSON document:
///   {"model": "vec", "features": "mfcc", "dims": 20, "seed": 7,
///    "folds": 10, "fold_accuracy": [...], "mean_accuracy": 0.97}
std::string report_to_json(const ml::CvReport& report);
ml::CvReport report_from_json(std::string_view text);  // throws DataError

/// Reads every *.json run file in a directory, in file-name order.
std::vector<ml::CvReport> load_reports(const std::filesystem::path& dir);

enum class ReportFormat { kText, kCsv };

/// Results table with columns feature, dims, seed, knn, rf, vec (mean
/// accuracy). Rows are ordered by feature kind (fusion lists compare kind
/// by kind) and then seed; runs of the same features, dims and seed share a
/// row. A cell holding a second run of the same model starts a new row.
std::string emit_report(std::vector<ml::CvReport> reports, ReportFormat format);

/// Inverse of the CSV table: one CvReport per filled cell, with dims, seed
/// and mean accuracy (fold accuracies are not part of the table).
std::vector<ml::CvReport> parse_report_csv(std::string_view csv);

}  // namespace pdfscope::pipeline
