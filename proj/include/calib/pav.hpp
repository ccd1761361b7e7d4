#pragma once

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "calib/core.hpp"

namespace calib {

/// Cumulative-sum diagram of a sorted dataset: points (i, S_i) for
/// i = 0..n where S_i counts positives among the first i samples.
/// Within a tie block positives come first so the per-sample diagram
/// stays on or above each block's chord.
struct CumulativeDiagram {
  std::vector<std::array<long long, 2>> points;
};

CumulativeDiagram make_diagram(const SortedGroups& groups);

/// Isotonic fit: one calibrated value per sample in sorted-score order,
/// plus the indices of the diagram points on the lower convex hull.
struct IsotonicFit {
  std::vector<double> z;
  std::vector<std::size_t> hull_vertices;
};

/// Continuous nondecreasing recalibration map: piecewise linear through
/// the knots, constant outside their span.
struct LinkFunction {
  std::vector<std::pair<double, double>> knots;  // (score, value), scores strictly ascending

  double evaluate(double score) const;
};

IsotonicFit fit_pav(const ScoredDataset& dataset);

LinkFunction build_link(const IsotonicFit& fit, const ScoredDataset& dataset);

std::vector<double> apply_link(const LinkFunction& link, std::span<const double> scores);

/// (1/n) * max over contiguous index ranges of |sum(label - z)|.
double calibration_objective(std::span<const double> z, std::span<const int> labels);

struct ConvergenceDiagnostics {
  std::vector<double> grid;
  std::vector<double> F;    // distribution function of the score
  std::vector<double> G;    // sub-distribution of positives
  std::vector<double> G_e;  // same with link(f) in place of the true rate
  std::vector<double> cvF;  // convex minorant of (F, G) evaluated at F
};

ConvergenceDiagnostics convergence_diagnostics(const DiscreteDistribution& dist,
                                               const LinkFunction& link,
                                               std::span<const double> grid);

}  // namespace calib
