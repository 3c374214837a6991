#include "pdfscope/ml/model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "pdfscope/bytes.hpp"

namespace pdfscope::ml {
namespace {

constexpr std::string_view kMagic = "pdfscope-model";
constexpr int kFormatVersion = 1;

// ---- random forest ---------------------------------------------------

struct SplitChoice {
  std::int32_t feature = TreeNode::kLeaf;
  double threshold = 0.0;
  double impurity = 0.0;
};

double gini(double malware, double total) {
  if (total <= 0) return 0.0;
  const double p = malware / total;
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const int> y, std::mt19937_64& rng)
      : x_(x), y_(y), rng_(rng), mtry_(std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(x.cols())))))) {}

  DecisionTree build(std::vector<std::size_t> samples) {
    tree_.nodes.clear();
    grow(std::move(samples));
    return std::move(tree_);
  }

 private:
  std::uint32_t grow(std::vector<std::size_t> samples) {
    const auto id = static_cast<std::uint32_t>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    std::size_t malware = 0;
    for (auto s : samples) malware += y_[s] == kMalware;
    tree_.nodes[id].malware_fraction = static_cast<double>(malware) / static_cast<double>(samples.size());
    if (samples.size() < 2 || malware == 0 || malware == samples.size()) return id;

    const auto split = choose_split(samples);
    if (split.feature == TreeNode::kLeaf) return id;

    std::vector<std::size_t> left, right;
    for (auto s : samples) {
      (x_(s, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(s);
    }
    samples.clear();
    samples.shrink_to_fit();
    tree_.nodes[id].feature = split.feature;
    tree_.nodes[id].threshold = split.threshold;
    const auto l = grow(std::move(left));
    const auto r = grow(std::move(right));
    tree_.nodes[id].left = l;
    tree_.nodes[id].right = r;
    return id;
  }

  // Draws candidate features without replacement. If none of the first
  // mtry can separate the node, keeps drawing until one can.
  SplitChoice choose_split(std::span<const std::size_t> samples) {
    std::vector<std::size_t> features(x_.cols());
    std::iota(features.begin(), features.end(), std::size_t{0});
    SplitChoice best;
    bool found = false;
    for (std::size_t drawn = 0; drawn < features.size(); ++drawn) {
      const std::size_t pick = drawn + uniform_index(rng_, features.size() - drawn);
      std::swap(features[drawn], features[pick]);
      if (auto s = best_split_on(samples, features[drawn])) {
        if (!found || s->impurity < best.impurity) best = *s;
        found = true;
      }
      if (found && drawn + 1 >= mtry_) break;
    }
    return best;
  }

  std::optional<SplitChoice> best_split_on(std::span<const std::size_t> samples, std::size_t feature) {
    order_.assign(samples.begin(), samples.end());
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return x_(a, feature) < x_(b, feature); });
    const double n = static_cast<double>(order_.size());
    double total_mal = 0;
    for (auto s : order_) total_mal += y_[s] == kMalware;

    std::optional<SplitChoice> best;
    double left_mal = 0;
    for (std::size_t i = 0; i + 1 < order_.size(); ++i) {
      left_mal += y_[order_[i]] == kMalware;
      const double lo = x_(order_[i], feature);
      const double hi = x_(order_[i + 1], feature);
      if (!(lo < hi)) continue;
      const double nl = static_cast<double>(i + 1);
      const double nr = n - nl;
      const double impurity = (nl * gini(left_mal, nl) + nr * gini(total_mal - left_mal, nr)) / n;
      if (!best || impurity < best->impurity) {
        double threshold = lo + (hi - lo) / 2.0;
        if (!(threshold < hi)) threshold = lo;
        best = SplitChoice{static_cast<std::int32_t>(feature), threshold, impurity};
      }
    }
    return best;
  }

  const Matrix& x_;
  std::span<const int> y_;
  std::mt19937_64& rng_;
  std::size_t mtry_;
  DecisionTree tree_;
  std::vector<std::size_t> order_;
};

// ---- persistence helpers ---------------------------------------------

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  std::string word() {
    std::string w;
    if (!(in_ >> w)) throw DataError("model file: unexpected end of input");
    return w;
  }
  void expect(std::string_view w) {
    const auto got = word();
    if (got != w) throw DataError("model file: expected '" + std::string(w) + "', got '" + got + "'");
  }
  template <typename T>
  T number() {
    const auto w = word();
    std::istringstream ss(w);
    T v{};
    if constexpr (std::is_floating_point_v<T>) {
      char* end = nullptr;
      v = static_cast<T>(std::strtod(w.c_str(), &end));
      if (end != w.c_str() + w.size()) throw DataError("model file: bad number '" + w + "'");
    } else {
      if (!(ss >> v) || !ss.eof()) throw DataError("model file: bad integer '" + w + "'");
    }
    return v;
  }
  std::vector<double> doubles(std::size_t n) {
    std::vector<double> v(n);
    for (auto& x : v) x = number<double>();
    return v;
  }

 private:
  std::istream& in_;
};

void write_row(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) out << (i ? " " : "") << format_double(values[i]);
  out << '\n';
}

void check_odd_k(std::size_t k, std::size_t n) {
  if (k == 0 || k % 2 == 0) throw UsageError("knn: k must be a positive odd integer");
  if (k > n) throw UsageError("knn: k exceeds the number of training samples");
}

}  // namespace

std::string_view model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kKnn: return "knn";
    case ModelKind::kRf: return "rf";
    case ModelKind::kVec: return "vec";
  }
  throw UsageError("unknown model kind");
}

std::optional<ModelKind> parse_model(std::string_view name) {
  if (name == "knn") return ModelKind::kKnn;
  if (name == "rf") return ModelKind::kRf;
  if (name == "vec") return ModelKind::kVec;
  return std::nullopt;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  const TreeNode* node = &nodes.at(0);
  while (node->feature != TreeNode::kLeaf) {
    node = &nodes[x[static_cast<std::size_t>(node->feature)] <= node->threshold ? node->left : node->right];
  }
  return *node;
}

int majority_vote(std::span<const int> labels) {
  if (labels.empty()) throw UsageError("majority_vote: no voters");
  std::size_t malware = 0;
  for (int l : labels) malware += l == kMalware;
  // Ties go to malware.
  return 2 * malware >= labels.size() ? kMalware : kBenign;
}

TrainedModel::TrainedModel(ModelKind kind, std::uint64_t seed, Standardizer scaler, Params params)
    : kind_(kind), seed_(seed), scaler_(std::move(scaler)), params_(std::move(params)) {
  const bool consistent = (kind == ModelKind::kKnn && std::holds_alternative<KnnModel>(params_)) ||
                          (kind == ModelKind::kRf && std::holds_alternative<ForestModel>(params_)) ||
                          (kind == ModelKind::kVec && std::holds_alternative<VotingModel>(params_));
  if (!consistent) throw UsageError("model kind does not match parameters");
  if (const auto* rf = std::get_if<ForestModel>(&params_); rf && rf->trees.empty()) {
    throw UsageError("random forest needs at least one tree");
  }
  if (const auto* knn = std::get_if<KnnModel>(&params_)) check_odd_k(knn->k, knn->labels.size());
  if (const auto* vec = std::get_if<VotingModel>(&params_); vec && vec->members.size() < 2) {
    throw UsageError("voting ensemble needs at least two members");
  }
}

Prediction TrainedModel::predict(std::span<const double> x) const {
  if (x.size() != dims()) {
    throw UsageError("predict: expected " + std::to_string(dims()) + " features, got " + std::to_string(x.size()));
  }
  if (const auto* vec = std::get_if<VotingModel>(&params_)) {
    std::vector<int> votes;
    double score = 0.0;
    for (const auto& m : vec->members) {
      const auto p = m.predict(x);
      votes.push_back(p.label);
      score += p.score;
    }
    return {majority_vote(votes), score / static_cast<double>(votes.size())};
  }
  const auto z = scaler_.transform(x);
  return predict_scaled(z);
}

Prediction TrainedModel::predict_scaled(std::span<const double> z) const {
  if (const auto* knn = std::get_if<KnnModel>(&params_)) {
    const std::size_t n = knn->labels.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = knn->points.row(i);
      double d = 0.0;
      for (std::size_t c = 0; c < z.size(); ++c) {
        const double diff = p[c] - z[c];
        d += diff * diff;
      }
      dist[i] = {d, i};
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(knn->k), dist.end());
    std::size_t malware = 0;
    for (std::size_t i = 0; i < knn->k; ++i) malware += knn->labels[dist[i].second] == kMalware;
    const double score = static_cast<double>(malware) / static_cast<double>(knn->k);
    return {2 * malware > knn->k ? kMalware : kBenign, score};
  }
  const auto& rf = std::get<ForestModel>(params_);
  double score = 0.0;
  for (const auto& tree : rf.trees) score += tree.leaf_for(z).malware_fraction;
  score /= static_cast<double>(rf.trees.size());
  return {score >= 0.5 ? kMalware : kBenign, score};
}

void TrainedModel::save(std::ostream& out) const {
  out << kMagic << ' ' << kFormatVersion << '\n';
  out << "kind " << model_name(kind_) << '\n';
  out << "seed " << seed_ << '\n';
  out << "dims " << dims() << '\n';
  out << "mean ";
  write_row(out, scaler_.mean());
  out << "stddev ";
  write_row(out, scaler_.stddev());
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, KnnModel>) {
          out << "knn " << p.k << ' ' << p.labels.size() << '\n';
          for (std::size_t i = 0; i < p.labels.size(); ++i) {
            out << p.labels[i] << ' ';
            write_row(out, p.points.row(i));
          }
        } else if constexpr (std::is_same_v<T, ForestModel>) {
          out << "forest " << p.trees.size() << '\n';
          for (const auto& tree : p.trees) {
            out << "tree " << tree.nodes.size() << '\n';
            for (const auto& n : tree.nodes) {
              out << n.feature << ' ' << format_double(n.threshold) << ' ' << n.left << ' ' << n.right << ' '
                  << format_double(n.malware_fraction) << '\n';
            }
          }
        } else {
          out << "members " << p.members.size() << '\n';
          for (const auto& m : p.members) m.save(out);
        }
      },
      params_);
  out << "end\n";
}

TrainedModel TrainedModel::load(std::istream& in) {
  Reader r(in);
  r.expect(kMagic);
  if (const auto v = r.number<int>(); v != kFormatVersion) {
    throw DataError("model file: unsupported version " + std::to_string(v));
  }
  r.expect("kind");
  const auto kind_word = r.word();
  const auto kind = parse_model(kind_word);
  if (!kind) throw DataError("model file: unknown kind " + kind_word);
  r.expect("seed");
  const auto seed = r.number<std::uint64_t>();
  r.expect("dims");
  const auto dims = r.number<std::size_t>();
  r.expect("mean");
  auto mean = r.doubles(dims);
  r.expect("stddev");
  auto sd = r.doubles(dims);
  Standardizer scaler(std::move(mean), std::move(sd));

  Params params;
  switch (*kind) {
    case ModelKind::kKnn: {
      r.expect("knn");
      KnnModel m;
      m.k = r.number<std::size_t>();
      const auto n = r.number<std::size_t>();
      m.points = Matrix(n, dims);
      for (std::size_t i = 0; i < n; ++i) {
        m.labels.push_back(r.number<int>());
        auto row = r.doubles(dims);
        std::copy(row.begin(), row.end(), m.points.row(i).begin());
      }
      params = std::move(m);
      break;
    }
    case ModelKind::kRf: {
      r.expect("forest");
      ForestModel m;
      const auto trees = r.number<std::size_t>();
      for (std::size_t t = 0; t < trees; ++t) {
        r.expect("tree");
        DecisionTree tree;
        const auto nodes = r.number<std::size_t>();
        for (std::size_t i = 0; i < nodes; ++i) {
          TreeNode n;
          n.feature = r.number<std::int32_t>();
          n.threshold = r.number<double>();
          n.left = r.number<std::uint32_t>();
          n.right = r.number<std::uint32_t>();
          n.malware_fraction = r.number<double>();
          const bool bad_child = n.feature != TreeNode::kLeaf && (n.left >= nodes || n.right >= nodes);
          if (bad_child || n.feature >= static_cast<std::int32_t>(dims) || n.feature < TreeNode::kLeaf) {
            throw DataError("model file: corrupt tree node");
          }
          tree.nodes.push_back(n);
        }
        if (tree.nodes.empty()) throw DataError("model file: empty tree");
        m.trees.push_back(std::move(tree));
      }
      params = std::move(m);
      break;
    }
    case ModelKind::kVec: {
      r.expect("members");
      VotingModel m;
      const auto n = r.number<std::size_t>();
      for (std::size_t i = 0; i < n; ++i) m.members.push_back(load(in));
      params = std::move(m);
      break;
    }
  }
  r.expect("end");
  try {
    return TrainedModel(*kind, seed, std::move(scaler), std::move(params));
  } catch (const UsageError& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
}

TrainedModel train_knn(const LabeledSet& data, std::size_t k) {
  validate(data, false);
  check_odd_k(k, data.size());
  auto scaler = Standardizer::fit(data.x);
  KnnModel m{k, scaler.transform(data.x), data.y};
  return TrainedModel(ModelKind::kKnn, 0, std::move(scaler), std::move(m));
}

TrainedModel train_rf(const LabeledSet& data, std::size_t n_trees, std::uint64_t seed) {
  validate(data, true);
  if (n_trees == 0) throw UsageError("random forest needs at least one tree");
  auto scaler = Standardizer::fit(data.x);
  const Matrix z = scaler.transform(data.x);
  std::mt19937_64 rng(seed);
  TreeBuilder builder(z, data.y, rng);
  ForestModel forest;
  const std::size_t n = data.size();
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::vector<std::size_t> bootstrap(n);
    for (auto& s : bootstrap) s = uniform_index(rng, n);
    std::sort(bootstrap.begin(), bootstrap.end());
    forest.trees.push_back(builder.build(std::move(bootstrap)));
  }
  return TrainedModel(ModelKind::kRf, seed, std::move(scaler), std::move(forest));
}

TrainedModel train_vec(const LabeledSet& data, std::size_t k, std::size_t n_trees, std::uint64_t seed) {
  VotingModel vote;
  vote.members.push_back(train_knn(data, k));
  vote.members.push_back(train_rf(data, n_trees, seed));
  auto scaler = vote.members.front().standardizer();
  return TrainedModel(ModelKind::kVec, seed, std::move(scaler), std::move(vote));
}

TrainedModel train(const LabeledSet& data, const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::kKnn: return train_knn(data, spec.k);
    case ModelKind::kRf: return train_rf(data, spec.n_trees, spec.seed);
    case ModelKind::kVec: return train_vec(data, spec.k, spec.n_trees, spec.seed);
  }
  throw UsageError("unknown model kind");
}

Prediction predict(const TrainedModel& model, std::span<const double> x) { return model.predict(x); }

Prediction predict(const TrainedModel& model, const FeatureVector& x) { return model.predict(x.values); }

}  // namespace pdfscope::ml
