#include "calib/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace calib {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Shared prefix-extreme sweep over per-group deviations d_j. Prefix index
/// j covers groups 1..j; interval (l, r] has deviation pre[r] - pre[l].
/// The worst pair maximizes |pre[r] - pre[l]| with l < r; ties resolve to
/// the smallest p1, then the smallest p2.
WorstInterval worst_interval_from_deviations(std::span<const double> deviations,
                                             std::span<const double> boundary_scores,
                                             double* range_out) {
  const std::size_t m = deviations.size();
  std::vector<double> prefix(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) prefix[j + 1] = prefix[j] + deviations[j];

  const double max_pre = *std::max_element(prefix.begin(), prefix.end());
  const double min_pre = *std::min_element(prefix.begin(), prefix.end());
  *range_out = max_pre - min_pre;

  // has_max_after[l] / has_min_after[l]: some r > l attains the extreme.
  std::vector<char> has_max_after(m + 1, 0), has_min_after(m + 1, 0);
  bool max_seen = false, min_seen = false;
  for (std::size_t l = m + 1; l-- > 0;) {
    has_max_after[l] = max_seen;
    has_min_after[l] = min_seen;
    if (prefix[l] == max_pre) max_seen = true;
    if (prefix[l] == min_pre) min_seen = true;
  }

  std::size_t left = 0, right = 1;
  for (std::size_t l = 0; l <= m; ++l) {
    const bool low_to_high = prefix[l] == min_pre && has_max_after[l];
    const bool high_to_low = prefix[l] == max_pre && has_min_after[l];
    if (!low_to_high && !high_to_low) continue;
    left = l;
    const double target = low_to_high ? max_pre : min_pre;
    for (std::size_t r = l + 1; r <= m; ++r) {
      if (prefix[r] == target) {
        right = r;
        break;
      }
    }
    break;
  }

  WorstInterval worst;
  worst.p1 = left == 0 ? kNegInf : boundary_scores[left - 1];
  worst.p2 = boundary_scores[right - 1];
  worst.signed_deviation = prefix[right] - prefix[left];
  return worst;
}

}  // namespace

CalibrationReport empirical_calibration(const ScoredDataset& dataset) {
  const SortedGroups groups = group_by_score(dataset);

  std::vector<double> deviations, scores;
  deviations.reserve(groups.groups.size());
  scores.reserve(groups.groups.size());
  for (const auto& g : groups.groups) {
    deviations.push_back(static_cast<double>(g.positives) -
                         static_cast<double>(g.count) * g.score);
    scores.push_back(g.score);
  }

  CalibrationReport report;
  report.n = groups.total;
  double range = 0.0;
  report.worst_interval = worst_interval_from_deviations(deviations, scores, &range);
  report.c_emp = range / static_cast<double>(groups.total);
  return report;
}

CalibrationReport empirical_calibration_bruteforce(const ScoredDataset& dataset) {
  if (dataset.empty()) throw Error(Errc::empty_dataset, "empirical_calibration_bruteforce");
  validate_dataset(dataset);

  // Distinct scores ascending, then per-score count/positive tallies,
  // aggregated directly rather than through group_by_score.
  std::vector<double> distinct;
  distinct.reserve(dataset.size());
  for (const auto& s : dataset.samples) distinct.push_back(s.score);
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  const std::size_t m = distinct.size();
  std::vector<double> deviation(m, 0.0);
  for (const auto& s : dataset.samples) {
    const std::size_t j =
        std::lower_bound(distinct.begin(), distinct.end(), s.score) - distinct.begin();
    deviation[j] += static_cast<double>(s.label) - s.score;
  }

  // Every interval (l, r] examined explicitly; the empty interval
  // contributes 0.
  const std::size_t n = dataset.size();
  double best = 0.0;
  std::size_t best_l = 0, best_r = 1;
  double best_signed = 0.0;
  for (std::size_t l = 0; l < m; ++l) {
    double acc = 0.0;
    for (std::size_t r = l + 1; r <= m; ++r) {
      acc += deviation[r - 1];
      if (std::abs(acc) > best) {
        best = std::abs(acc);
        best_l = l;
        best_r = r;
        best_signed = acc;
      }
    }
  }

  CalibrationReport report;
  report.n = n;
  report.c_emp = best / static_cast<double>(n);
  report.worst_interval.p1 = best_l == 0 ? kNegInf : distinct[best_l - 1];
  report.worst_interval.p2 = distinct[best_r - 1];
  report.worst_interval.signed_deviation = best_signed;
  return report;
}

TrueCalibrationReport true_calibration(const DiscreteDistribution& dist) {
  validate_distribution(dist);

  std::vector<double> deviations, scores;
  deviations.reserve(dist.atoms.size());
  scores.reserve(dist.atoms.size());
  for (const auto& atom : dist.atoms) {
    deviations.push_back(atom.mass * (atom.positive_rate - atom.f_value));
    scores.push_back(atom.f_value);
  }

  TrueCalibrationReport report;
  double range = 0.0;
  report.worst_interval = worst_interval_from_deviations(deviations, scores, &range);
  report.c = range;
  return report;
}

double l1_empirical(std::span<const double> scores, std::span<const double> true_probs) {
  if (scores.size() != true_probs.size())
    throw Error(Errc::length_mismatch, "l1_empirical inputs differ in length");
  if (scores.empty()) throw Error(Errc::empty_input, "l1_empirical");
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) total += std::abs(scores[i] - true_probs[i]);
  return total / static_cast<double>(scores.size());
}

}  // namespace calib
