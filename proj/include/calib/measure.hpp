#pragma once

#include <cstddef>
#include <span>

#include "calib/core.hpp"

namespace calib {

/// Worst-deviation interval (p1, p2]. p1 is -infinity when the interval
/// is open below the smallest score. signed_deviation is the raw sum
/// over the interval (positives minus score mass), not divided by n;
/// its sign shows over- vs under-confidence.
struct WorstInterval {
  double p1;
  double p2;
  double signed_deviation;
};

struct CalibrationReport {
  double c_emp;
  WorstInterval worst_interval;
  std::size_t n;
};

struct TrueCalibrationReport {
  double c;
  WorstInterval worst_interval;
};

/// Empirical calibration measure: (1/n) sup over p1 < p2 of
/// |sum of labels in (p1,p2] - sum of scores in (p1,p2]|. Deviations
/// change only at distinct score values, so the sup is taken over group
/// boundaries via prefix extremes. O(n log n).
CalibrationReport empirical_calibration(const ScoredDataset& dataset);

/// Independent O(m^2) oracle over distinct-score boundary pairs: walks
/// every interval explicitly instead of taking prefix extremes. Intended
/// for n up to a few thousand.
CalibrationReport empirical_calibration_bruteforce(const ScoredDataset& dataset);

/// Population measure c(f) on an explicit finite distribution.
TrueCalibrationReport true_calibration(const DiscreteDistribution& dist);

/// Mean absolute gap between estimated and true conditional
/// probabilities (Monte Carlo form of the l1 distance).
double l1_empirical(std::span<const double> scores, std::span<const double> true_probs);

}  // namespace calib
