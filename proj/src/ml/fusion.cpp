#include "pdfscope/ml/fusion.hpp"

#include <map>
#include <mutex>

#include "pdfscope/bytes.hpp"

namespace pdfscope::ml {
namespace {

struct Registry {
  std::mutex mutex;
  std::map<std::string, ComplementarityMetric, std::less<>> metrics{{"union-correctness", union_correctness}};
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

FeatureVector concat_features(std::span<const FeatureVector> parts, std::span<const Standardizer> stats) {
  if (parts.size() != stats.size()) throw UsageError("concat_features: one standardizer per part required");
  if (parts.empty()) throw UsageError("concat_features: nothing to concatenate");
  FeatureVector fused{FeatureKind::kFused, {}};
  for (std::size_t i = 0; i < parts.size(); ++i) {
    check_feature(parts[i]);
    const auto z = stats[i].transform(parts[i].values);
    fused.values.insert(fused.values.end(), z.begin(), z.end());
  }
  return fused;
}

double union_correctness(const std::vector<bool>& a, const std::vector<bool>& b) {
  std::size_t either = 0;
  for (std::size_t i = 0; i < a.size(); ++i) either += a[i] || b[i];
  return static_cast<double>(either) / static_cast<double>(a.size());
}

void register_complementarity_metric(std::string name, ComplementarityMetric metric) {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  r.metrics[std::move(name)] = std::move(metric);
}

std::vector<std::string> complementarity_metrics() {
  auto& r = registry();
  std::lock_guard lock(r.mutex);
  std::vector<std::string> names;
  for (const auto& [name, _] : r.metrics) names.push_back(name);
  return names;
}

double jfs_score(const std::vector<bool>& a, const std::vector<bool>& b, std::string_view strategy) {
  if (a.size() != b.size()) throw UsageError("jfs_score: correctness vectors differ in length");
  if (a.size() < 2) throw UsageError("jfs_score: need at least 2 samples");
  ComplementarityMetric metric;
  {
    auto& r = registry();
    std::lock_guard lock(r.mutex);
    auto it = r.metrics.find(strategy);
    if (it == r.metrics.end()) throw UsageError("unknown complementarity metric: " + std::string(strategy));
    metric = it->second;
  }
  return metric(a, b);
}

}  // namespace pdfscope::ml
