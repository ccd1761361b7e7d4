#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "calib/core.hpp"

namespace calib {

/// Asymmetric misclassification costs: a per false positive, b per false
/// negative. Both must be finite and positive.
struct CostPair {
  double a = 1.0;
  double b = 1.0;
};

void validate_costs(const CostPair& costs);

struct LossSummary {
  double threshold = 0.0;
  double total_loss = 0.0;
  double mean_loss = 0.0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Threshold a/(a+b); the optimal rule predicts 1 iff the estimate is at
/// least this value.
double bayes_threshold(const CostPair& costs);

LossSummary empirical_loss(const ScoredDataset& dataset, double threshold,
                           const CostPair& costs);

double expected_loss_on_distribution(const DiscreteDistribution& dist, double threshold,
                                     const CostPair& costs);

/// Section-4 style experiment: fit PAV on the validation set, recalibrate
/// the test scores, and for each p compare mean loss (a = p, b = 1 - p,
/// threshold p) after calibration against before. Returns (p, ratio).
std::vector<std::pair<double, double>> loss_ratio_experiment(
    const ScoredDataset& validation, const ScoredDataset& test,
    std::span<const double> p_grid);

}  // namespace calib
