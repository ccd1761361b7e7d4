#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "calib/core.hpp"

namespace calib {

/// Interval-threshold function classes: H uses unit weights, H1 keeps
/// only positive-label samples, H2 weighs samples by their score.
enum class IntervalClass { H, H1, H2 };

const char* interval_class_name(IntervalClass variant);

struct RademacherEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t num_sigma = 0;
  IntervalClass class_variant = IntervalClass::H;
  bool exact = false;
};

/// Monte Carlo (or, for n <= 20 with enough budget, exact) estimate of
/// the empirical Rademacher complexity of the interval class on this
/// dataset. Per sign vector the supremum runs over selections of whole
/// score-tie groups forming an interval, including the empty selection.
RademacherEstimate estimate_interval_rademacher(const ScoredDataset& dataset,
                                                IntervalClass variant,
                                                std::size_t num_sigma, std::uint64_t seed);

RademacherEstimate estimate_interval_rademacher_serial(const ScoredDataset& dataset,
                                                       IntervalClass variant,
                                                       std::size_t num_sigma,
                                                       std::uint64_t seed);

struct SvmWitness {
  std::vector<int> sigma;
  std::vector<double> weights;
  double lambda = 0.0;
  double achieved = 0.0;
  std::size_t target = 0;
};

/// Minimum-norm linear interpolation of an arbitrary sign pattern on
/// linearly independent rows, pushed through a saturating sigmoid; the
/// achieved sum approaches the count of +1 signs as lambda_magnitude
/// grows.
SvmWitness svm_witness(const std::vector<std::vector<double>>& X,
                       const std::vector<int>& sigma, double lambda_magnitude = 50.0);

/// Smallest epsilon for which the uniform-convergence premise
/// rademacher + sqrt(2 ln(8/delta) / n) < epsilon/2 holds at equality.
double theorem2_epsilon(double rademacher, std::size_t n, double delta);

/// sqrt((2d(ln(n/d) + 1) + 4 ln(p_star_size + 1)) / n).
double finite_output_bound(std::size_t d, std::size_t n, std::size_t p_star_size);

}  // namespace calib
