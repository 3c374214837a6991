#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "doctest.h"
#include "pdfscope/ml/cv.hpp"
#include "pdfscope/ml/fusion.hpp"
#include "pdfscope/ml/model.hpp"
#include "support.hpp"

using namespace pdfscope;
using namespace pdfscope::ml;

namespace {

LabeledSet make_set(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
  LabeledSet s;
  for (const auto& r : rows) s.x.push_row(r);
  s.y = labels;
  return s;
}

// Two Gaussian blobs, well apart.
LabeledSet blobs(std::mt19937_64& rng, std::size_t per_class, std::size_t dims, double gap) {
  std::normal_distribution<double> nd;
  LabeledSet s;
  for (int label : {kBenign, kMalware}) {
    for (std::size_t i = 0; i < per_class; ++i) {
      std::vector<double> r(dims);
      for (auto& v : r) v = nd(rng) + (label ? gap : 0.0);
      s.x.push_row(r);
      s.y.push_back(label);
    }
  }
  return s;
}

// z-scored brute-force KNN with stable (distance, index) ordering
int knn_oracle(const LabeledSet& train, std::span<const double> q, std::size_t k) {
  const auto n = train.size(), d = train.dims();
  std::vector<double> mean(d, 0.0), sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) mean[c] += train.x(i, c) / n;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) sd[c] += (train.x(i, c) - mean[c]) * (train.x(i, c) - mean[c]) / n;
  for (auto& v : sd) v = std::sqrt(v);
  auto z = [&](double v, std::size_t c) { return sd[c] > 0 ? (v - mean[c]) / sd[c] : 0.0; };
  std::vector<std::pair<double, std::size_t>> dist;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0;
    for (std::size_t c = 0; c < d; ++c) s += std::pow(z(train.x(i, c), c) - z(q[c], c), 2);
    dist.push_back({s, i});
  }
  std::stable_sort(dist.begin(), dist.end());
  std::size_t votes = 0;
  for (std::size_t i = 0; i < k; ++i) votes += train.y[dist[i].second];
  return 2 * votes > k ? kMalware : kBenign;
}

std::string saved(const TrainedModel& m) {
  std::ostringstream out;
  m.save(out);
  return out.str();
}

}  // namespace

TEST_SUITE("ml") {
  TEST_CASE("accuracy") {
    CHECK(accuracy(std::vector<int>{1, 0, 1}, std::vector<int>{1, 0, 1}) == 1.0);
    CHECK(accuracy(std::vector<int>{1, 1}, std::vector<int>{0, 0}) == 0.0);
    CHECK(accuracy(std::vector<int>{1, 0, 1, 1}, std::vector<int>{1, 0, 1, 0}) == 0.75);
    CHECK_THROWS_AS(accuracy(std::vector<int>{}, std::vector<int>{}), UsageError);
    CHECK_THROWS_AS(accuracy(std::vector<int>{1}, std::vector<int>{1, 0}), UsageError);
  }

  TEST_CASE("standardizer uses population statistics and zeroes constant columns") {
    Matrix x;
    x.push_row(std::vector<double>{1, 5});
    x.push_row(std::vector<double>{3, 5});
    const auto s = Standardizer::fit(x);
    CHECK(s.mean()[0] == 2.0);
    CHECK(s.stddev()[0] == 1.0);
    CHECK(s.transform(std::vector<double>{4, 9}) == std::vector<double>{2.0, 0.0});
  }

  TEST_CASE("uniform_index is fixed across platforms") {
    std::mt19937_64 a(99), b(99);
    for (int i = 0; i < 1000; ++i) {
      const auto n = static_cast<std::size_t>(1 + i % 17);
      const auto v = uniform_index(a, n);
      CHECK(v < n);
      CHECK(v == uniform_index(b, n));
    }
    std::mt19937_64 c(1);
    std::vector<std::size_t> seen(3, 0);
    for (int i = 0; i < 3000; ++i) ++seen[uniform_index(c, 3)];
    for (auto s : seen) CHECK(s > 900);
  }

  TEST_CASE("knn preconditions") {
    const auto two = make_set({{0.0}, {1.0}}, {0, 1});
    CHECK_THROWS_AS(train_knn(two, 3), UsageError);
    CHECK_THROWS_AS(train_knn(two, 2), UsageError);
    const auto m = train_knn(two, 1);
    CHECK_THROWS_AS(m.predict(std::vector<double>{0.0, 1.0}), UsageError);
  }

  TEST_CASE("knn k=1 recalls its training points") {
    std::mt19937_64 rng(71);
    const auto data = blobs(rng, 30, 4, 0.5);
    const auto m = train_knn(data, 1);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto p = m.predict(data.x.row(i));
      CHECK(p.label == data.y[i]);
      CHECK((p.score == 0.0 || p.score == 1.0));
    }
  }

  TEST_CASE("knn duplicate points follow index order") {
    const auto data = make_set({{1.0, 1.0}, {1.0, 1.0}, {5.0, 5.0}}, {1, 0, 0});
    CHECK(train_knn(data, 1).predict(std::vector<double>{1.0, 1.0}).label == kMalware);
    const auto swapped = make_set({{1.0, 1.0}, {1.0, 1.0}, {5.0, 5.0}}, {0, 1, 0});
    CHECK(train_knn(swapped, 1).predict(std::vector<double>{1.0, 1.0}).label == kBenign);
  }

  TEST_CASE("knn agrees with a brute-force neighbour sort") {
    std::mt19937_64 rng(72);
    for (int trial = 0; trial < 10; ++trial) {
      auto data = blobs(rng, 25, 3, 0.8);
      // some exact duplicates to exercise the tie rule
      for (int d = 0; d < 5; ++d) {
        const auto r = rng() % data.size();
        const std::vector<double> row(data.x.row(r).begin(), data.x.row(r).end());
        data.x.push_row(row);
        data.y.push_back(1 - data.y[r]);
      }
      for (std::size_t k : {1u, 3u, 5u}) {
        const auto m = train_knn(data, k);
        for (int q = 0; q < 20; ++q) {
          std::vector<double> x(3);
          if (q % 2) {
            const auto r = rng() % data.size();
            x.assign(data.x.row(r).begin(), data.x.row(r).end());
          } else {
            for (auto& v : x) v = static_cast<double>(rng() % 200) / 100.0 - 0.5;
          }
          CHECK(m.predict(x).label == knn_oracle(data, x, k));
        }
      }
    }
  }

  TEST_CASE("random forest fits separable data and XOR") {
    std::mt19937_64 rng(73);
    const auto data = blobs(rng, 40, 3, 6.0);
    const auto m = train_rf(data, 10, 1);
    for (std::size_t i = 0; i < data.size(); ++i) CHECK(m.predict(data.x.row(i)).label == data.y[i]);

    const auto xr = make_set({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {0, 1, 1, 0});
    const auto f = train_rf(xr, 200, 5);
    for (std::size_t i = 0; i < 4; ++i) CHECK(f.predict(xr.x.row(i)).label == xr.y[i]);
  }

  TEST_CASE("random forest preconditions and determinism") {
    CHECK_THROWS_AS(train_rf(make_set({{0.0}, {1.0}}, {1, 1}), 5, 0), UsageError);
    CHECK_THROWS_AS(train_rf(make_set({{0.0}, {1.0}}, {0, 1}), 0, 0), UsageError);
    std::mt19937_64 rng(74);
    const auto data = blobs(rng, 30, 6, 1.0);
    const auto a = train_rf(data, 20, 9);
    const auto b = train_rf(data, 20, 9);
    const auto& fa = std::get<ForestModel>(a.params());
    const auto& fb = std::get<ForestModel>(b.params());
    CHECK(fa.trees == fb.trees);
    CHECK(saved(a) == saved(b));
    const auto c = train_rf(data, 20, 10);
    CHECK(saved(a) != saved(c));
  }

  TEST_CASE("forest score is the mean leaf fraction") {
    std::mt19937_64 rng(75);
    const auto data = blobs(rng, 20, 2, 1.0);
    const auto m = train_rf(data, 15, 3);
    const auto& forest = std::get<ForestModel>(m.params());
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto z = m.standardizer().transform(data.x.row(i));
      double s = 0;
      for (const auto& t : forest.trees) s += t.leaf_for(z).malware_fraction;
      s /= forest.trees.size();
      const auto p = m.predict(data.x.row(i));
      CHECK(p.score == doctest::Approx(s).epsilon(1e-12));
      CHECK(p.label == (s >= 0.5 ? kMalware : kBenign));
    }
  }

  TEST_CASE("all-malware forest") {
    Standardizer id(std::vector<double>{0.0}, std::vector<double>{1.0});
    DecisionTree leaf;
    leaf.nodes.push_back(TreeNode{TreeNode::kLeaf, 0.0, 0, 0, 1.0});
    const TrainedModel m(ModelKind::kRf, 0, id, ForestModel{{leaf, leaf, leaf}});
    const auto p = m.predict(std::vector<double>{3.0});
    CHECK(p.score == 1.0);
    CHECK(p.label == kMalware);
  }

  TEST_CASE("vote tie goes to malware") {
    CHECK(majority_vote(std::vector<int>{kBenign, kMalware}) == kMalware);
    CHECK(majority_vote(std::vector<int>{kBenign, kBenign}) == kBenign);
    CHECK(majority_vote(std::vector<int>{kBenign, kBenign, kMalware}) == kBenign);

    // a knn that says benign and a forest that says malware
    const auto data = make_set({{0.0}, {1.0}, {2.0}}, {0, 0, 1});
    const auto knn = train_knn(data, 1);
    Standardizer id(std::vector<double>{0.0}, std::vector<double>{1.0});
    DecisionTree leaf;
    leaf.nodes.push_back(TreeNode{TreeNode::kLeaf, 0.0, 0, 0, 1.0});
    const TrainedModel rf(ModelKind::kRf, 0, id, ForestModel{{leaf}});
    const TrainedModel vec(ModelKind::kVec, 0, knn.standardizer(), VotingModel{{knn, rf}});
    CHECK(knn.predict(std::vector<double>{0.0}).label == kBenign);
    const auto p = vec.predict(std::vector<double>{0.0});
    CHECK(p.label == kMalware);
    CHECK(p.score == doctest::Approx(0.5));
  }

  TEST_CASE("property: VEC agrees with its members when they agree") {
    std::mt19937_64 rng(76);
    const auto data = blobs(rng, 40, 5, 0.7);
    const auto vec = train_vec(data, 3, 25, 2);
    const auto& members = std::get<VotingModel>(vec.params()).members;
    REQUIRE(members.size() == 2);
    std::normal_distribution<double> nd(0.35, 1.0);
    for (int q = 0; q < 200; ++q) {
      std::vector<double> x(5);
      for (auto& v : x) v = nd(rng);
      const auto a = members[0].predict(x).label;
      const auto b = members[1].predict(x).label;
      const auto v = vec.predict(x).label;
      if (a == b) CHECK(v == a);
      else CHECK(v == kMalware);
    }
  }

  TEST_CASE("model save and load round trip") {
    std::mt19937_64 rng(77);
    const auto data = blobs(rng, 20, 4, 1.0);
    for (const auto& m : {train_knn(data, 3), train_rf(data, 7, 4), train_vec(data, 3, 7, 4)}) {
      const auto text = saved(m);
      CHECK(text.rfind("pdfscope-model 1\n", 0) == 0);
      std::istringstream in(text);
      const auto back = TrainedModel::load(in);
      CHECK(saved(back) == text);
      CHECK(back.kind() == m.kind());
      for (std::size_t i = 0; i < data.size(); ++i) {
        const auto p = m.predict(data.x.row(i));
        const auto q = back.predict(data.x.row(i));
        CHECK(p.label == q.label);
        CHECK(p.score == q.score);
      }
    }
    std::istringstream bad("pdfscope-model 9\n");
    CHECK_THROWS_AS(TrainedModel::load(bad), DataError);
    std::istringstream cut(saved(train_knn(data, 1)).substr(0, 60));
    CHECK_THROWS_AS(TrainedModel::load(cut), DataError);
  }

  TEST_CASE("concat features") {
    Matrix a, b;
    a.push_row(std::vector<double>{1, 2});
    a.push_row(std::vector<double>{3, 2});
    b.push_row(std::vector<double>{10});
    b.push_row(std::vector<double>{20});
    const std::vector<Standardizer> stats = {Standardizer::fit(a), Standardizer::fit(b)};
    std::vector<FeatureVector> p2 = {{FeatureKind::kFused, {3, 7}}, {FeatureKind::kFused, {15}}};
    const auto f = concat_features(p2, stats);
    CHECK(f.kind == FeatureKind::kFused);
    CHECK(f.values == std::vector<double>{1.0, 0.0, 0.0});

    const std::vector<FeatureVector> one = {{FeatureKind::kFused, {1, 2}}};
    const std::vector<Standardizer> one_stat = {stats[0]};
    CHECK(concat_features(one, one_stat).values == stats[0].transform(std::vector<double>{1, 2}));
    CHECK_THROWS_AS(concat_features(one, stats), UsageError);
  }

  TEST_CASE("fused dimension of the headline combination") {
    std::vector<FeatureVector> parts = {{FeatureKind::kBigramDctGist, std::vector<double>(320, 0.5)},
                                        {FeatureKind::kMfcc, std::vector<double>(20, 1.0)},
                                        {FeatureKind::kStructural, std::vector<double>(25, 2.0)}};
    std::vector<Standardizer> stats;
    for (const auto& p : parts) {
      Matrix m;
      m.push_row(p.values);
      stats.push_back(Standardizer::fit(m));
    }
    CHECK(concat_features(parts, stats).size() == 365);
  }

  TEST_CASE("jfs stand-in") {
    const std::vector<bool> a = {true, true, false, false};
    const std::vector<bool> b = {false, false, true, true};
    CHECK(jfs_score(a, a) == 0.5);
    CHECK(jfs_score(a, b) == 1.0);
    CHECK(jfs_score(a, {true, false, true, false}) == 0.75);
    CHECK_THROWS_AS(jfs_score(a, {true}), UsageError);
    CHECK_THROWS_AS(jfs_score({true}, {true}), UsageError);
    CHECK_THROWS_AS(jfs_score(a, b, "nope"), UsageError);
    register_complementarity_metric("disagreement", [](const std::vector<bool>& x, const std::vector<bool>& y) {
      double d = 0;
      for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
      return d / x.size();
    });
    CHECK(jfs_score(a, b, "disagreement") == 1.0);
    const auto names = complementarity_metrics();
    CHECK(std::find(names.begin(), names.end(), "union-correctness") != names.end());
  }
}

TEST_SUITE("cv") {
  TEST_CASE("stratified folds partition and balance") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 30; ++trial) {
      const std::size_t n = 20 + rng() % 200;
      std::vector<int> labels(n);
      for (auto& l : labels) l = rng() % 3 == 0;
      const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
      if (pos < 10 || n - pos < 10) continue;
      const auto folds = stratified_folds(labels, 10, rng());
      std::vector<int> seen(n, 0);
      for (const auto& f : folds) {
        for (auto i : f) ++seen[i];
        const auto fp = static_cast<double>(std::count_if(f.begin(), f.end(), [&](auto i) { return labels[i]; }));
        CHECK(std::abs(fp - static_cast<double>(pos) / 10) <= 1.0);
        CHECK(std::abs(static_cast<double>(f.size() - fp) - static_cast<double>(n - pos) / 10) <= 1.0);
        CHECK(std::is_sorted(f.begin(), f.end()));
      }
      for (int s : seen) CHECK(s == 1);
    }
  }

  TEST_CASE("small classes are rejected") {
    std::vector<int> labels(30, 0);
    for (int i = 0; i < 9; ++i) labels[i] = 1;
    CHECK_THROWS_AS(stratified_folds(labels, 10, 0), DataError);
    CHECK_THROWS_AS(stratified_folds(labels, 1, 0), UsageError);
  }

  TEST_CASE("separable data scores 1.0") {
    std::mt19937_64 rng(82);
    auto data = blobs(rng, 50, 4, 10.0);
    for (auto kind : {ModelKind::kKnn, ModelKind::kRf, ModelKind::kVec}) {
      const auto r = cross_validate(data, {kind, 3, 20, 1}, {10, 5, false});
      CHECK(r.report.mean_accuracy == 1.0);
      CHECK(r.report.fold_accuracy.size() == 10);
    }
  }

  TEST_CASE("shuffled labels score near chance") {
    std::mt19937_64 rng(83);
    auto data = blobs(rng, 100, 4, 0.0);
    std::shuffle(data.y.begin(), data.y.end(), rng);
    const auto r = cross_validate(data, {ModelKind::kKnn, 3, 20, 1}, {10, 5, false});
    CHECK(std::abs(r.report.mean_accuracy - 0.5) <= 0.15);
  }

  TEST_CASE("report mean is the mean of folds") {
    std::mt19937_64 rng(84);
    auto data = blobs(rng, 40, 3, 1.0);
    const auto r = cross_validate(data, {ModelKind::kVec, 3, 15, 2}, {10, 6, false});
    const auto& acc = r.report.fold_accuracy;
    CHECK(std::abs(r.report.mean_accuracy - std::accumulate(acc.begin(), acc.end(), 0.0) / 10) <= 1e-12);
    CHECK(r.report.dims == 3);
    CHECK(r.report.seed == 6);
    const auto again = cross_validate(data, {ModelKind::kVec, 3, 15, 2}, {10, 6, false});
    CHECK(again.report.fold_accuracy == acc);
  }

  TEST_CASE("fold standardisation ignores held-out values") {
    std::mt19937_64 rng(85);
    auto data = blobs(rng, 30, 3, 1.0);
    const auto base = cross_validate(data, {ModelKind::kKnn, 3, 10, 1}, {10, 3, false});
    for (std::size_t f = 0; f < base.folds.size(); ++f) {
      auto changed = data;
      for (auto i : base.folds[f])
        for (std::size_t c = 0; c < 3; ++c) changed.x(i, c) = 1000.0 + static_cast<double>(rng() % 100);
      const auto r = cross_validate(changed, {ModelKind::kKnn, 3, 10, 1}, {10, 3, false});
      CHECK(r.folds == base.folds);
      CHECK(r.standardizers[f] == base.standardizers[f]);
    }
  }
}
