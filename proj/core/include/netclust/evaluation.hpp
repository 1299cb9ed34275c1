#pragma once

#include <string>
#include <utility>
#include <vector>

namespace netclust {

enum class NmiNormalization { kArithmeticMean, kSqrt };

// Scores are percentages in [0,100]. confusion is K_pred x K_true over the
// distinct label values in ascending order; assignment maps each predicted
// label value to its matched true label value (-1 when matched to a dummy).
struct EvalReport {
  double nmi = 0.0;
  double acc = 0.0;
  std::vector<std::vector<long>> confusion;
  std::vector<int> pred_values;
  std::vector<int> true_values;
  std::vector<std::pair<int, int>> assignment;
  NmiNormalization normalization = NmiNormalization::kArithmeticMean;
};

// Mutual information of the label joint, normalized by the arithmetic mean
// of the entropies (or sqrt of their product), times 100. Two trivial
// single-cluster partitions score 100.
double nmi(const std::vector<int>& pred, const std::vector<int>& truth,
           NmiNormalization normalization = NmiNormalization::kArithmeticMean);

// Minimum-cost perfect assignment. Rectangular inputs are padded to square
// with zero-cost dummies; returns row -> column, -1 for rows matched to a
// dummy column. Costs must be finite.
std::vector<int> hungarian(const std::vector<std::vector<double>>& cost);

// Fraction of vertices whose predicted cluster maps to their true class
// under the optimal one-to-one cluster-class matching, times 100.
double accuracy(const std::vector<int>& pred, const std::vector<int>& truth);

EvalReport evaluate(const std::vector<int>& pred, const std::vector<int>& truth,
                    NmiNormalization normalization = NmiNormalization::kArithmeticMean);

std::string report_to_json(const EvalReport& report);

}  // namespace netclust
