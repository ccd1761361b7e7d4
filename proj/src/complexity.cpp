#include "calib/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "calib/errors.hpp"
#include "calib/rng.hpp"

namespace calib {

const char* interval_class_name(IntervalClass variant) {
  switch (variant) {
    case IntervalClass::H: return "H";
    case IntervalClass::H1: return "H1";
    case IntervalClass::H2: return "H2";
  }
  return "?";
}

namespace {

/// Flattened sorted view: per sample its tie-group index and the weight
/// factor the class variant assigns to it. Within a group positives come
/// first; the order only fixes which sigma entry lands on which sample.
struct SampleLayout {
  std::vector<std::size_t> group;
  std::vector<double> factor;
  std::size_t num_groups = 0;
};

SampleLayout make_layout(const SortedGroups& groups, IntervalClass variant) {
  SampleLayout layout;
  layout.num_groups = groups.groups.size();
  layout.group.reserve(groups.total);
  layout.factor.reserve(groups.total);
  for (std::size_t j = 0; j < groups.groups.size(); ++j) {
    const auto& g = groups.groups[j];
    for (std::size_t k = 0; k < g.count; ++k) {
      const bool positive = k < g.positives;
      double f = 1.0;
      if (variant == IntervalClass::H1) f = positive ? 1.0 : 0.0;
      if (variant == IntervalClass::H2) f = g.score;
      layout.group.push_back(j);
      layout.factor.push_back(f);
    }
  }
  return layout;
}

/// Sup over interval selections of pooled weights, empty selection
/// included: max over l < r of pre_r - pre_l, floored at 0.
double interval_sup(const std::vector<double>& group_weights) {
  double best = 0.0, pre = 0.0, min_pre = 0.0;
  for (double w : group_weights) {
    pre += w;
    best = std::max(best, pre - min_pre);
    min_pre = std::min(min_pre, pre);
  }
  return best;
}

double sup_for_signs(const SampleLayout& layout, const std::uint64_t* sign_bits,
                     std::vector<double>& scratch) {
  std::fill(scratch.begin(), scratch.end(), 0.0);
  const std::size_t n = layout.group.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double sign = (sign_bits[i >> 6] >> (i & 63)) & 1u ? 1.0 : -1.0;
    scratch[layout.group[i]] += sign * layout.factor[i];
  }
  return interval_sup(scratch);
}

RademacherEstimate estimate_impl(const ScoredDataset& dataset, IntervalClass variant,
                                 std::size_t num_sigma, std::uint64_t seed, bool parallel) {
  if (dataset.empty()) throw Error(Errc::empty_dataset, "estimate_interval_rademacher");
  if (num_sigma == 0)
    throw Error(Errc::invalid_arguments, "num_sigma must be at least 1");
  validate_dataset(dataset);

  const SortedGroups groups = group_by_score(dataset);
  const SampleLayout layout = make_layout(groups, variant);
  const std::size_t n = groups.total;

  const bool exact = n <= 20 && num_sigma >= (std::size_t{1} << n);
  const std::size_t trials = exact ? (std::size_t{1} << n) : num_sigma;
  const std::size_t words = (n + 63) / 64;

  std::vector<double> sups(trials);

#pragma omp parallel if (parallel)
  {
    std::vector<double> scratch(layout.num_groups);
    std::vector<std::uint64_t> bits(words);
#pragma omp for schedule(static)
    for (long long t = 0; t < static_cast<long long>(trials); ++t) {
      if (exact) {
        bits[0] = static_cast<std::uint64_t>(t);
      } else {
        Rng rng = Rng::substream(seed, static_cast<std::uint64_t>(t));
        for (auto& w : bits) w = rng.next_u64();
      }
      sups[static_cast<std::size_t>(t)] =
          sup_for_signs(layout, bits.data(), scratch) / static_cast<double>(n);
    }
  }

  double sum = 0.0;
  for (double s : sups) sum += s;
  const double mean = sum / static_cast<double>(trials);

  double std_error = 0.0;
  if (!exact && trials > 1) {
    double ss = 0.0;
    for (double s : sups) ss += (s - mean) * (s - mean);
    std_error = std::sqrt(ss / static_cast<double>(trials - 1)) /
                std::sqrt(static_cast<double>(trials));
  }

  RademacherEstimate est;
  est.mean = mean;
  est.std_error = std_error;
  est.num_sigma = trials;
  est.class_variant = variant;
  est.exact = exact;
  return est;
}

}  // namespace

RademacherEstimate estimate_interval_rademacher(const ScoredDataset& dataset,
                                                IntervalClass variant,
                                                std::size_t num_sigma, std::uint64_t seed) {
  return estimate_impl(dataset, variant, num_sigma, seed, true);
}

RademacherEstimate estimate_interval_rademacher_serial(const ScoredDataset& dataset,
                                                       IntervalClass variant,
                                                       std::size_t num_sigma,
                                                       std::uint64_t seed) {
  return estimate_impl(dataset, variant, num_sigma, seed, false);
}

SvmWitness svm_witness(const std::vector<std::vector<double>>& X,
                       const std::vector<int>& sigma, double lambda_magnitude) {
  const std::size_t n = X.size();
  if (n == 0) throw Error(Errc::empty_input, "svm_witness");
  const std::size_t d = X[0].size();
  for (const auto& row : X)
    if (row.size() != d)
      throw Error(Errc::dimension_mismatch, "ragged rows in svm_witness input");
  if (n >= d)
    throw Error(Errc::dimension_mismatch, "need n < d, got n = " + std::to_string(n) +
                                              ", d = " + std::to_string(d));
  if (sigma.size() != n)
    throw Error(Errc::length_mismatch, "sigma length " + std::to_string(sigma.size()) +
                                           " for " + std::to_string(n) + " rows");
  for (int s : sigma)
    if (s != 1 && s != -1)
      throw Error(Errc::invalid_arguments, "sigma entries must be +1 or -1");
  if (!(std::isfinite(lambda_magnitude) && lambda_magnitude > 0.0))
    throw Error(Errc::invalid_arguments, "lambda_magnitude must be positive");

  Eigen::MatrixXd mat(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mat(i, j) = X[i][j];
  Eigen::VectorXd target(n);
  for (std::size_t i = 0; i < n; ++i) target(i) = static_cast<double>(sigma[i]);

  const Eigen::MatrixXd gram = mat * mat.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const double max_eig = eig.eigenvalues().maxCoeff();
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig <= 1e-8 * max_eig)
    throw Error(Errc::rank_deficient, "gram eigenvalue ratio " +
                                          std::to_string(max_eig > 0 ? min_eig / max_eig : 0.0));

  const Eigen::VectorXd coeffs = eig.eigenvectors() *
                                 (eig.eigenvectors().transpose() * target).cwiseQuotient(
                                     eig.eigenvalues());
  const Eigen::VectorXd w = mat.transpose() * coeffs;

  const double lambda = -lambda_magnitude;
  SvmWitness witness;
  witness.sigma = sigma;
  witness.weights.assign(w.data(), w.data() + w.size());
  witness.lambda = lambda;
  const Eigen::VectorXd margins = mat * w;
  double achieved = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = 1.0 / (1.0 + std::exp(lambda * margins(i)));
    achieved += static_cast<double>(sigma[i]) * f;
    if (sigma[i] == 1) ++witness.target;
  }
  witness.achieved = achieved;
  return witness;
}

double theorem2_epsilon(double rademacher, std::size_t n, double delta) {
  if (!(std::isfinite(rademacher) && rademacher >= 0.0))
    throw Error(Errc::invalid_arguments, "rademacher must be a finite nonnegative value");
  if (n == 0) throw Error(Errc::invalid_arguments, "n must be at least 1");
  if (!(delta > 0.0 && delta < 1.0))
    throw Error(Errc::invalid_delta, "delta " + std::to_string(delta));
  return 2.0 * (rademacher + std::sqrt(2.0 * std::log(8.0 / delta) / static_cast<double>(n)));
}

double finite_output_bound(std::size_t d, std::size_t n, std::size_t p_star_size) {
  if (d == 0 || p_star_size == 0 || n <= d + 1)
    throw Error(Errc::invalid_arguments, "need d >= 1, p_star_size >= 1, n > d + 1");
  const double dd = static_cast<double>(d);
  const double nn = static_cast<double>(n);
  const double numerator = 2.0 * dd * (std::log(nn / dd) + 1.0) +
                           4.0 * std::log(static_cast<double>(p_star_size) + 1.0);
  return std::sqrt(numerator / nn);
}

}  // namespace calib
