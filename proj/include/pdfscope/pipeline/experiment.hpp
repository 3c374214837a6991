#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pdfscope/ml/cv.hpp"
#include "pdfscope/pipeline/cache.hpp"
#include "pdfscope/pipeline/manifest.hpp"

namespace pdfscope::pipeline {

/// A single feature kind, or an ordered list of kinds fused by
/// concatenation.
struct FeatureSpec {
  std::vector<FeatureKind> kinds;

  static FeatureSpec parse(std::string_view list);
  std::string name() const;  // "mfcc" or "bigramdct-gist,mfcc,structural"
  bool fused() const { return kinds.size() > 1; }
};

/// Samples usable for a feature spec: rows with a cached value for every
/// requested kind. A sample excluded for one kind still takes part in
/// experiments that do not need that kind.
struct ExperimentData {
  std::vector<std::size_t> rows;  // indices into manifest.rows
  std::vector<int> labels;
  std::vector<std::string> excluded;  // "path: reason"
};

ExperimentData select_samples(const DatasetManifest& manifest, const FeatureCache& cache, const FeatureSpec& spec);

/// Fold builder over cached features. Static kinds are concatenated raw
/// (the model standardises on its training split); an apicalls part fits
/// its vocabulary on the training indices only.
ml::FoldBuilder make_fold_builder(const DatasetManifest& manifest, const FeatureCache& cache,
                                  const FeatureSpec& spec, const ExperimentData& data);

struct ExperimentResult {
  ExperimentData data;
  ml::CvResult cv;
};

/// Stratified k-fold CV of `model` over `spec`. Throws DataError when the
/// usable samples cannot support the requested folds.
ExperimentResult run_experiment(const DatasetManifest& manifest, const FeatureCache& cache,
                                const ml::ModelSpec& model, const FeatureSpec& spec, const ml::CvOptions& options);

/// Model trained on every usable sample, plus the vocabulary when the spec
/// includes apicalls.
struct FinalModel {
  ml::TrainedModel model;
  std::optional<dynamic::ApiVocabulary> vocabulary;
};

FinalModel train_final_model(const DatasetManifest& manifest, const FeatureCache& cache, const ml::ModelSpec& model,
                             const FeatureSpec& spec);

}  // namespace pdfscope::pipeline
