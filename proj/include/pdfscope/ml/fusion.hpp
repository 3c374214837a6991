#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pdfscope/feature.hpp"
#include "pdfscope/ml/dataset.hpp"

namespace pdfscope::ml {

/// Z-scores each part with its training-set statistics and concatenates
/// them in the given order; kind = fused.
FeatureVector concat_features(std::span<const FeatureVector> parts, std::span<const Standardizer> stats);

/// Complementarity of two feature-space models, computed from per-sample
/// correctness bits. Higher means the models err on different samples.
using ComplementarityMetric = std::function<double(const std::vector<bool>&, const std::vector<bool>&)>;

/// Fraction of samples that at least one model classifies correctly.
double union_correctness(const std::vector<bool>& a, const std::vector<bool>& b);

/// Registers (or replaces) a named metric. "union-correctness" is built in.
void register_complementarity_metric(std::string name, ComplementarityMetric metric);
std::vector<std::string> complementarity_metrics();

/// Joint feature score through the named strategy. Throws UsageError on
/// unequal lengths, fewer than 2 samples, or an unknown strategy.
double jfs_score(const std::vector<bool>& a, const std::vector<bool>& b,
                 std::string_view strategy = "union-correctness");

}  // namespace pdfscope::ml
