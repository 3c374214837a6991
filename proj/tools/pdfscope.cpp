#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdfscope/bytes.hpp"
#include "pdfscope/disarm.hpp"
#include "pdfscope/ml/model.hpp"
#include "pdfscope/pipeline/cache.hpp"
#include "pdfscope/pipeline/experiment.hpp"
#include "pdfscope/pipeline/manifest.hpp"
#include "pdfscope/pipeline/report.hpp"
#include "pdfscope/pipeline/synth.hpp"

namespace fs = std::filesystem;
using namespace pdfscope;

namespace {

pipeline::DatasetManifest load_manifest(const fs::path& path) {
  auto manifest = pipeline::ingest(path);
  for (const auto& r : manifest.rejects) std::cerr << "manifest line " << r.line << ": " << r.reason << "\n";
  for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << "\n";
  return manifest;
}

void featurize(const pipeline::DatasetManifest& manifest, std::span<const FeatureKind> kinds,
               pipeline::FeatureCache& cache, unsigned threads) {
  const auto stats = pipeline::featurize_all(manifest, kinds, cache, threads);
  for (const auto& m : stats.messages) std::cerr << m << "\n";
  if (stats.computed || stats.failed) cache.save();
  std::cerr << "featurize: " << stats.computed << " computed, " << stats.reused << " cached, " << stats.failed
            << " failed\n";
}

int cmd_featurize(const fs::path& manifest_path, const std::string& kinds_list, const fs::path& cache_dir,
                  unsigned threads) {
  const auto manifest = load_manifest(manifest_path);
  const auto kinds = pipeline::parse_kinds(kinds_list);
  auto cache = pipeline::FeatureCache::open(cache_dir);
  featurize(manifest, kinds, cache, threads);
  return 0;
}

struct CvArgs {
  fs::path manifest;
  fs::path cache;
  std::string model = "vec";
  std::string features;
  std::uint64_t seed = 0;
  std::size_t folds = 10;
  std::size_t k = 3;
  std::size_t trees = 100;
  unsigned threads = 0;
  fs::path out;
  fs::path save_model;
};

int cmd_cv(const CvArgs& a) {
  const auto kind = ml::parse_model(a.model);
  if (!kind) throw UsageError("unknown model " + a.model + " (expected knn, rf or vec)");
  const auto spec = pipeline::FeatureSpec::parse(a.features);
  ml::ModelSpec model{*kind, a.k, a.trees, a.seed};

  const auto manifest = load_manifest(a.manifest);
  auto cache = pipeline::FeatureCache::open(a.cache);
  featurize(manifest, spec.kinds, cache, a.threads);

  const auto result = pipeline::run_experiment(manifest, cache, model, spec, {a.folds, a.seed, false});
  for (const auto& e : result.data.excluded) std::cerr << "excluded " << e << "\n";
  const auto json = pipeline::report_to_json(result.cv.report);
  if (a.out.empty()) {
    std::cout << json;
  } else {
    write_file(a.out, json);
  }
  std::fprintf(stderr, "%s %s: mean accuracy %.4f over %zu samples\n", a.model.c_str(), spec.name().c_str(),
               result.cv.report.mean_accuracy, result.data.rows.size());

  if (!a.save_model.empty()) {
    const auto final_model = pipeline::train_final_model(manifest, cache, model, spec);
    std::ostringstream out;
    final_model.model.save(out);
    write_file(a.save_model, out.str());
    if (final_model.vocabulary) {
      write_file(fs::path(a.save_model.string() + ".vocab"), final_model.vocabulary->to_text());
    }
  }
  return 0;
}

int cmd_report(const fs::path& in, const std::string& format, const fs::path& out) {
  pipeline::ReportFormat f;
  if (format == "text") {
    f = pipeline::ReportFormat::kText;
  } else if (format == "csv") {
    f = pipeline::ReportFormat::kCsv;
  } else {
    throw UsageError("unknown format " + format + " (expected text or csv)");
  }
  const auto table = pipeline::emit_report(pipeline::load_reports(in), f);
  if (out.empty()) {
    std::cout << table;
  } else {
    write_file(out, table);
  }
  return 0;
}

int cmd_disarm(int method, const fs::path& in, const fs::path& out_dir, const fs::path& report_path) {
  if (method != 1 && method != 2) throw UsageError("--method must be 1 or 2");
  std::vector<fs::path> inputs;
  if (fs::is_directory(in)) {
    for (const auto& e : fs::directory_iterator(in)) {
      if (e.is_regular_file()) inputs.push_back(e.path());
    }
    std::sort(inputs.begin(), inputs.end());
  } else if (fs::is_regular_file(in)) {
    inputs.push_back(in);
  } else {
    throw DataError("no such file or directory: " + in.string());
  }

  std::string report;
  std::size_t total = 0;
  for (const auto& path : inputs) {
    const auto data = read_file(path);
    const auto result = disarm::disarm(data, static_cast<disarm::Method>(method));
    write_file(out_dir / path.filename(), result.data);
    report += result.report.to_text(path.string());
    total += result.report.replacements.size();
  }
  if (report_path.empty()) {
    std::cout << report;
  } else {
    write_file(report_path, report);
  }
  std::cerr << "disarm: " << inputs.size() << " files, " << total << " replacements\n";
  return 0;
}

int cmd_synth(const fs::path& out, std::size_t n, std::uint64_t seed) {
  const auto manifest = pipeline::synth_corpus(out, n, seed);
  std::cerr << "synth: wrote " << n << " samples, manifest " << manifest.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Static and dynamic PDF malware features, classifiers and disarming"};
  app.require_subcommand(1);

  fs::path manifest, cache_dir;
  std::string kinds;
  unsigned threads = 0;
  auto* feat = app.add_subcommand("featurize", "compute and cache features for a manifest");
  feat->add_option("--manifest", manifest, "CSV with path,label[,report_path]")->required();
  feat->add_option("--kinds", kinds, "comma-separated feature kinds")->required();
  feat->add_option("--cache", cache_dir, "cache directory")->required();
  feat->add_option("--threads", threads, "worker threads (0 = all cores)");

  CvArgs cv;
  auto* cvc = app.add_subcommand("cv", "stratified k-fold cross-validation");
  cvc->add_option("--manifest", cv.manifest)->required();
  cvc->add_option("--cache", cv.cache)->required();
  cvc->add_option("--model", cv.model, "knn, rf or vec")->required();
  cvc->add_option("--features", cv.features, "kind or comma-separated fusion list")->required();
  cvc->add_option("--seed", cv.seed);
  cvc->add_option("--folds", cv.folds);
  cvc->add_option("--k", cv.k, "KNN neighbours (odd)");
  cvc->add_option("--trees", cv.trees, "random forest size");
  cvc->add_option("--threads", cv.threads);
  cvc->add_option("--out", cv.out, "write the run JSON here instead of stdout");
  cvc->add_option("--save-model", cv.save_model, "also train on all samples and save the model");

  fs::path report_in, report_out;
  std::string format = "text";
  auto* rep = app.add_subcommand("report", "tabulate run files");
  rep->add_option("--in", report_in, "directory of run JSON files")->required();
  rep->add_option("--format", format, "text or csv");
  rep->add_option("--out", report_out);

  int method = 1;
  fs::path disarm_in, disarm_out, disarm_report;
  auto* dis = app.add_subcommand("disarm", "invert the case of risky tags");
  dis->add_option("--method", method, "1 (invert case) or 2 (also append _disarmed)")->required();
  dis->add_option("--in", disarm_in, "file or directory")->required();
  dis->add_option("--out", disarm_out, "output directory")->required();
  dis->add_option("--report", disarm_report, "replacement log (default stdout)");

  fs::path synth_out;
  std::size_t synth_n = 400;
  std::uint64_t synth_seed = 0;
  auto* syn = app.add_subcommand("synth", "write a seeded synthetic corpus");
  syn->add_option("--out", synth_out)->required();
  syn->add_option("--n", synth_n);
  syn->add_option("--seed", synth_seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*feat) return cmd_featurize(manifest, kinds, cache_dir, threads);
    if (*cvc) return cmd_cv(cv);
    if (*rep) return cmd_report(report_in, format, report_out);
    if (*dis) return cmd_disarm(method, disarm_in, disarm_out, disarm_report);
    if (*syn) return cmd_synth(synth_out, synth_n, synth_seed);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
