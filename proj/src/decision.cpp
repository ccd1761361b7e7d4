#include "calib/decision.hpp"

#include <cmath>
#include <string>

#include "calib/errors.hpp"
#include "calib/pav.hpp"

namespace calib {

void validate_costs(const CostPair& costs) {
  if (!(std::isfinite(costs.a) && costs.a > 0.0))
    throw Error(Errc::invalid_cost, "false-positive cost " + std::to_string(costs.a));
  if (!(std::isfinite(costs.b) && costs.b > 0.0))
    throw Error(Errc::invalid_cost, "false-negative cost " + std::to_string(costs.b));
}

double bayes_threshold(const CostPair& costs) {
  validate_costs(costs);
  return costs.a / (costs.a + costs.b);
}

LossSummary empirical_loss(const ScoredDataset& dataset, double threshold,
                           const CostPair& costs) {
  validate_costs(costs);
  if (dataset.empty()) throw Error(Errc::empty_dataset, "empirical_loss");
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(Errc::invalid_arguments, "threshold " + std::to_string(threshold));

  LossSummary summary;
  summary.threshold = threshold;
  for (const auto& s : dataset.samples) {
    const bool predict = s.score >= threshold;
    if (predict && s.label == 0) ++summary.fp;
    if (!predict && s.label == 1) ++summary.fn;
  }
  summary.total_loss = costs.a * static_cast<double>(summary.fp) +
                       costs.b * static_cast<double>(summary.fn);
  summary.mean_loss = summary.total_loss / static_cast<double>(dataset.size());
  return summary;
}

double expected_loss_on_distribution(const DiscreteDistribution& dist, double threshold,
                                     const CostPair& costs) {
  validate_costs(costs);
  validate_distribution(dist);
  if (!(threshold >= 0.0 && threshold <= 1.0))
    throw Error(Errc::invalid_arguments, "threshold " + std::to_string(threshold));

  double loss = 0.0;
  for (const auto& atom : dist.atoms) {
    if (atom.f_value >= threshold)
      loss += atom.mass * costs.a * (1.0 - atom.positive_rate);
    else
      loss += atom.mass * costs.b * atom.positive_rate;
  }
  return loss;
}

std::vector<std::pair<double, double>> loss_ratio_experiment(
    const ScoredDataset& validation, const ScoredDataset& test,
    std::span<const double> p_grid) {
  if (validation.empty()) throw Error(Errc::empty_dataset, "loss_ratio_experiment validation");
  if (test.empty()) throw Error(Errc::empty_dataset, "loss_ratio_experiment test");

  const IsotonicFit fit = fit_pav(validation);
  const LinkFunction link = build_link(fit, validation);

  ScoredDataset calibrated = test;
  for (auto& s : calibrated.samples) s.score = link.evaluate(s.score);

  std::vector<std::pair<double, double>> result;
  result.reserve(p_grid.size());
  for (double p : p_grid) {
    const CostPair costs{p, 1.0 - p};
    const double pre = empirical_loss(test, p, costs).mean_loss;
    const double post = empirical_loss(calibrated, p, costs).mean_loss;
    double ratio;
    if (pre == 0.0) {
      if (post != 0.0)
        throw Error(Errc::pre_loss_zero, "p = " + std::to_string(p));
      ratio = 1.0;
    } else {
      ratio = post / pre;
    }
    result.emplace_back(p, ratio);
  }
  return result;
}

}  // namespace calib
