#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pdfscope/ml/model.hpp"

namespace pdfscope::ml {

/// Stratified k-fold partition: each class is shuffled (seeded) and dealt
/// round-robin across folds, continuing where the previous class stopped.
/// Returns fold -> ascending sample indices. Throws DataError when a class
/// has fewer members than folds.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t folds,
                                                       std::uint64_t seed);

struct CvReport {
  ModelKind model = ModelKind::kVec;
  std::string features;  // kind name or comma-joined fusion list
  std::size_t dims = 0;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
};

/// Training rows and held-out rows for one fold, built from sample indices.
struct FoldData {
  LabeledSet train;
  Matrix test;
};

/// Builds a fold's matrices. Anything fitted from data (vocabularies,
/// statistics) must come from the training indices only.
using FoldBuilder =
    std::function<FoldData(std::span<const std::size_t> train, std::span<const std::size_t> test)>;

struct CvOptions {
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  bool keep_models = false;
};

struct CvResult {
  CvReport report;
  std::vector<std::vector<std::size_t>> folds;
  std::vector<Prediction> predictions;      // per sample, from the fold that held it out
  std::vector<Standardizer> standardizers;  // per fold, fitted on its training split
  std::vector<TrainedModel> models;         // per fold, when keep_models
};

CvResult cross_validate(std::span<const int> labels, const FoldBuilder& build, const ModelSpec& spec,
                        const CvOptions& options, std::string features);

/// Dense-data convenience: folds select rows of `data`.
CvResult cross_validate(const LabeledSet& data, const ModelSpec& spec, const CvOptions& options);

}  // namespace pdfscope::ml
