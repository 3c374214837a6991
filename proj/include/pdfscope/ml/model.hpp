#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pdfscope/ml/dataset.hpp"

namespace pdfscope::ml {

enum class ModelKind { kKnn, kRf, kVec };

std::string_view model_name(ModelKind kind);  // "knn", "rf", "vec"
std::optional<ModelKind> parse_model(std::string_view name);

struct ModelSpec {
  ModelKind kind = ModelKind::kVec;
  std::size_t k = 3;
  std::size_t n_trees = 100;
  std::uint64_t seed = 0;
};

struct Prediction {
  int label = kBenign;
  double score = 0.0;  // malware confidence in [0, 1]
};

struct KnnModel {
  std::size_t k = 3;
  Matrix points;  // standardised training rows
  std::vector<int> labels;
};

struct TreeNode {
  static constexpr std::int32_t kLeaf = -1;
  std::int32_t feature = kLeaf;
  double threshold = 0.0;  // go left when x[feature] <= threshold
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  double malware_fraction = 0.0;  // training-sample fraction at this node

  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  const TreeNode& leaf_for(std::span<const double> x) const;
  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
};

class TrainedModel;

struct VotingModel {
  std::vector<TrainedModel> members;
};

/// A fitted classifier together with the standardisation fitted on its
/// training data. Immutable once trained; predict is safe to call from
/// several threads.
class TrainedModel {
 public:
  using Params = std::variant<KnnModel, ForestModel, VotingModel>;

  TrainedModel(ModelKind kind, std::uint64_t seed, Standardizer scaler, Params params);

  ModelKind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t dims() const { return scaler_.dims(); }
  const Standardizer& standardizer() const { return scaler_; }
  const Params& params() const { return params_; }

  /// Throws UsageError on a dimension mismatch.
  Prediction predict(std::span<const double> x) const;

  /// Versioned text layout: header (kind, seed, dims), standardiser, then
  /// parameters. Doubles use 17 significant digits, so load(save(m))
  /// reproduces every value exactly.
  void save(std::ostream& out) const;
  static TrainedModel load(std::istream& in);

 private:
  Prediction predict_scaled(std::span<const double> z) const;

  ModelKind kind_;
  std::uint64_t seed_;
  Standardizer scaler_;
  Params params_;
};

/// k must be odd and <= N. Euclidean distance on standardised features;
/// equal distances are broken by lower training index.
TrainedModel train_knn(const LabeledSet& data, std::size_t k);

/// Bootstrap-aggregated Gini trees grown to purity, floor(sqrt(D)) candidate
/// features per split. Fully determined by (data, n_trees, seed).
TrainedModel train_rf(const LabeledSet& data, std::size_t n_trees, std::uint64_t seed);

/// Hard-majority vote over a KNN and an RF; a 1-1 split votes malware.
TrainedModel train_vec(const LabeledSet& data, std::size_t k, std::size_t n_trees, std::uint64_t seed);

TrainedModel train(const LabeledSet& data, const ModelSpec& spec);

Prediction predict(const TrainedModel& model, std::span<const double> x);
Prediction predict(const TrainedModel& model, const FeatureVector& x);

/// Majority rule used by the voting ensemble.
int majority_vote(std::span<const int> labels);

}  // namespace pdfscope::ml
