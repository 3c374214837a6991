#include "pdfscope/pipeline/experiment.hpp"

#include <algorithm>

#include "pdfscope/bytes.hpp"

namespace pdfscope::pipeline {
namespace {

bool has_calls(const FeatureSpec& spec) {
  return std::find(spec.kinds.begin(), spec.kinds.end(), FeatureKind::kApiCalls) != spec.kinds.end();
}

// One sample's row: requested kinds in order, apicalls projected on vocab.
std::vector<double> sample_row(const FeatureCache& cache, const std::string& hash, const FeatureSpec& spec,
                               const dynamic::ApiVocabulary* vocab) {
  std::vector<double> row;
  for (FeatureKind kind : spec.kinds) {
    if (kind == FeatureKind::kApiCalls) {
      const auto fv = dynamic::api_call_feature(*cache.calls(hash), *vocab);
      row.insert(row.end(), fv.values.begin(), fv.values.end());
    } else {
      const auto* v = cache.dense(hash, kind);
      row.insert(row.end(), v->begin(), v->end());
    }
  }
  return row;
}

std::optional<dynamic::ApiVocabulary> fit_vocabulary(const DatasetManifest& manifest, const FeatureCache& cache,
                                                     const FeatureSpec& spec, const ExperimentData& data,
                                                     std::span<const std::size_t> indices) {
  if (!has_calls(spec)) return std::nullopt;
  std::vector<dynamic::CallCounts> corpus;
  corpus.reserve(indices.size());
  for (auto i : indices) corpus.push_back(*cache.calls(manifest.rows[data.rows[i]].hash));
  return dynamic::build_api_vocabulary(corpus);
}

ml::Matrix build_rows(const DatasetManifest& manifest, const FeatureCache& cache, const FeatureSpec& spec,
                      const ExperimentData& data, std::span<const std::size_t> indices,
                      const dynamic::ApiVocabulary* vocab) {
  ml::Matrix x;
  for (auto i : indices) {
    const auto row = sample_row(cache, manifest.rows[data.rows[i]].hash, spec, vocab);
    if (row.empty()) throw DataError("feature set " + spec.name() + " has no dimensions");
    x.push_row(row);
  }
  return x;
}

FeatureKind set_kind(const FeatureSpec& spec) { return spec.fused() ? FeatureKind::kFused : spec.kinds.front(); }

}  // namespace

FeatureSpec FeatureSpec::parse(std::string_view list) {
  FeatureSpec spec{parse_kinds(list)};
  if (spec.kinds.empty()) throw UsageError("no feature kinds given");
  auto sorted = spec.kinds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw UsageError("feature kind listed twice: " + std::string(list));
  }
  if (std::find(sorted.begin(), sorted.end(), FeatureKind::kFused) != sorted.end()) {
    throw UsageError("\"fused\" is not a feature kind; list the parts instead");
  }
  return spec;
}

std::string FeatureSpec::name() const {
  std::string out;
  for (FeatureKind k : kinds) {
    if (!out.empty()) out += ',';
    out += kind_name(k);
  }
  return out;
}

ExperimentData select_samples(const DatasetManifest& manifest, const FeatureCache& cache, const FeatureSpec& spec) {
  ExperimentData data;
  for (std::size_t r = 0; r < manifest.rows.size(); ++r) {
    const auto& row = manifest.rows[r];
    std::string reason;
    for (FeatureKind kind : spec.kinds) {
      if (cache.has(row.hash, kind)) continue;
      const auto* err = cache.error(row.hash, kind);
      reason = std::string(kind_name(kind)) + ": " + (err ? *err : std::string("not featurized"));
      break;
    }
    if (!reason.empty()) {
      data.excluded.push_back(row.path.string() + ": " + reason);
      continue;
    }
    data.rows.push_back(r);
    data.labels.push_back(row.label);
  }
  return data;
}

ml::FoldBuilder make_fold_builder(const DatasetManifest& manifest, const FeatureCache& cache,
                                  const FeatureSpec& spec, const ExperimentData& data) {
  return [&manifest, &cache, spec, &data](std::span<const std::size_t> train, std::span<const std::size_t> test) {
    const auto vocab = fit_vocabulary(manifest, cache, spec, data, train);
    const auto* v = vocab ? &*vocab : nullptr;
    ml::FoldData fold;
    fold.train.x = build_rows(manifest, cache, spec, data, train, v);
    fold.train.kind = set_kind(spec);
    for (auto i : train) fold.train.y.push_back(data.labels[i]);
    fold.test = build_rows(manifest, cache, spec, data, test, v);
    return fold;
  };
}

ExperimentResult run_experiment(const DatasetManifest& manifest, const FeatureCache& cache,
                                const ml::ModelSpec& model, const FeatureSpec& spec, const ml::CvOptions& options) {
  ExperimentResult result;
  result.data = select_samples(manifest, cache, spec);
  if (result.data.rows.empty()) throw DataError("no samples have every feature in " + spec.name());
  const auto build = make_fold_builder(manifest, cache, spec, result.data);
  result.cv = ml::cross_validate(result.data.labels, build, model, options, spec.name());
  return result;
}

FinalModel train_final_model(const DatasetManifest& manifest, const FeatureCache& cache, const ml::ModelSpec& model,
                             const FeatureSpec& spec) {
  const auto data = select_samples(manifest, cache, spec);
  std::vector<std::size_t> all(data.rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  auto vocab = fit_vocabulary(manifest, cache, spec, data, all);
  ml::LabeledSet set;
  set.x = build_rows(manifest, cache, spec, data, all, vocab ? &*vocab : nullptr);
  set.y = data.labels;
  set.kind = set_kind(spec);
  ml::validate(set, true);
  return FinalModel{ml::train(set, model), std::move(vocab)};
}

}  // namespace pdfscope::pipeline
