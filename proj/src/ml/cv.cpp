#include "pdfscope/ml/cv.hpp"

#include <algorithm>
#include <numeric>

#include "pdfscope/bytes.hpp"

namespace pdfscope::ml {

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, std::size_t folds,
                                                       std::uint64_t seed) {
  if (folds < 2) throw UsageError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> by_class[2];
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != kBenign && labels[i] != kMalware) throw UsageError("labels must be 0 or 1");
    by_class[labels[i]].push_back(i);
  }
  for (const auto& members : by_class) {
    if (members.size() < folds) {
      throw DataError("each class needs at least " + std::to_string(folds) + " samples for " +
                      std::to_string(folds) + "-fold cross-validation");
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<std::vector<std::size_t>> out(folds);
  std::size_t next = 0;
  for (auto& members : by_class) {
    for (std::size_t i = members.size(); i > 1; --i) std::swap(members[i - 1], members[uniform_index(rng, i)]);
    for (auto s : members) {
      out[next].push_back(s);
      next = (next + 1) % folds;
    }
  }
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

CvResult cross_validate(std::span<const int> labels, const FoldBuilder& build, const ModelSpec& spec,
                        const CvOptions& options, std::string features) {
  CvResult result;
  result.folds = stratified_folds(labels, options.folds, options.seed);
  result.predictions.resize(labels.size());
  result.report.model = spec.kind;
  result.report.features = std::move(features);
  result.report.seed = options.seed;

  for (std::size_t f = 0; f < result.folds.size(); ++f) {
    const auto& test = result.folds[f];
    std::vector<std::size_t> train;
    train.reserve(labels.size() - test.size());
    for (std::size_t g = 0; g < result.folds.size(); ++g) {
      if (g != f) train.insert(train.end(), result.folds[g].begin(), result.folds[g].end());
    }
    std::sort(train.begin(), train.end());

    FoldData fold = build(train, test);
    if (fold.test.rows() != test.size()) throw UsageError("fold builder returned wrong test row count");
    const auto model = ml::train(fold.train, spec);
    result.report.dims = model.dims();

    std::vector<int> predicted, truth;
    for (std::size_t i = 0; i < test.size(); ++i) {
      const auto p = model.predict(fold.test.row(i));
      result.predictions[test[i]] = p;
      predicted.push_back(p.label);
      truth.push_back(labels[test[i]]);
    }
    result.report.fold_accuracy.push_back(accuracy(predicted, truth));
    result.standardizers.push_back(model.standardizer());
    if (options.keep_models) result.models.push_back(model);
  }
  const auto& acc = result.report.fold_accuracy;
  result.report.mean_accuracy = std::accumulate(acc.begin(), acc.end(), 0.0) / static_cast<double>(acc.size());
  return result;
}

CvResult cross_validate(const LabeledSet& data, const ModelSpec& spec, const CvOptions& options) {
  validate(data, true);
  auto build = [&data](std::span<const std::size_t> train, std::span<const std::size_t> test) {
    return FoldData{data.subset(train), data.x.select_rows(test)};
  };
  return cross_validate(data.y, build, spec, options, std::string(kind_name(data.kind)));
}

}  // namespace pdfscope::ml
