#include "calib/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "calib/rng.hpp"

namespace calib {

namespace {

const char* errc_names[] = {
    "MixedLabelConvention",
    "InvalidLabel",
    "InvalidScore",
    "EmptyDataset",
    "InvalidDistribution",
    "LengthMismatch",
    "EmptyInput",
    "FitDatasetMismatch",
    "ScoreOutOfRange",
    "EmptyGrid",
    "InvalidDelta",
    "InvalidArguments",
    "RankDeficient",
    "DimensionMismatch",
    "InvalidConfig",
    "EmptyCorpus",
    "IoFailure",
    "EmptyTrainingSet",
    "ConstantScores",
    "PreLossZero",
    "InvalidCost",
};

}  // namespace

const char* errc_name(Errc code) { return errc_names[static_cast<int>(code)]; }

void validate_dataset(const ScoredDataset& dataset) {
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    const auto& s = dataset.samples[i];
    if (!std::isfinite(s.score) || s.score < 0.0 || s.score > 1.0)
      throw Error(Errc::invalid_score,
                  "sample " + std::to_string(i) + " has score outside [0,1]");
    if (s.label != 0 && s.label != 1)
      throw Error(Errc::invalid_label, "sample " + std::to_string(i) + " has non-binary label");
  }
}

void validate_distribution(const DiscreteDistribution& dist) {
  if (dist.atoms.empty()) throw Error(Errc::invalid_distribution, "no atoms");
  double total_mass = 0.0;
  double prev_f = -1.0;
  for (const auto& atom : dist.atoms) {
    if (!std::isfinite(atom.f_value) || atom.f_value < 0.0 || atom.f_value > 1.0)
      throw Error(Errc::invalid_distribution, "f_value outside [0,1]");
    if (atom.f_value <= prev_f)
      throw Error(Errc::invalid_distribution, "f_values not strictly ascending");
    if (!(atom.mass > 0.0) || atom.mass > 1.0)
      throw Error(Errc::invalid_distribution, "mass outside (0,1]");
    if (!std::isfinite(atom.positive_rate) || atom.positive_rate < 0.0 || atom.positive_rate > 1.0)
      throw Error(Errc::invalid_distribution, "positive_rate outside [0,1]");
    total_mass += atom.mass;
    prev_f = atom.f_value;
  }
  if (std::abs(total_mass - 1.0) > 1e-12)
    throw Error(Errc::invalid_distribution, "masses do not sum to 1");
}

ScoredDataset make_dataset(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw Error(Errc::length_mismatch, "scores and labels differ in length");
  ScoredDataset dataset;
  dataset.samples.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i)
    dataset.samples.push_back({scores[i], labels[i]});
  validate_dataset(dataset);
  return dataset;
}

std::vector<int> canonicalize_labels(std::span<const double> raw_labels) {
  bool saw_minus = false, saw_zero = false;
  std::vector<int> out;
  out.reserve(raw_labels.size());
  for (std::size_t i = 0; i < raw_labels.size(); ++i) {
    const double v = raw_labels[i];
    if (v == -1.0) {
      saw_minus = true;
      out.push_back(0);
    } else if (v == 0.0) {
      saw_zero = true;
      out.push_back(0);
    } else if (v == 1.0) {
      out.push_back(1);
    } else {
      throw Error(Errc::invalid_label,
                  "label at index " + std::to_string(i) + " is not in {-1, 0, 1}");
    }
    if (saw_minus && saw_zero)
      throw Error(Errc::mixed_label_convention, "both -1 and 0 appear in the labels");
  }
  return out;
}

SortedGroups group_by_score(const ScoredDataset& dataset) {
  if (dataset.empty()) throw Error(Errc::empty_dataset, "group_by_score");
  validate_dataset(dataset);

  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dataset.samples[a].score < dataset.samples[b].score;
  });

  SortedGroups result;
  result.total = dataset.size();
  for (std::size_t idx : order) {
    const auto& s = dataset.samples[idx];
    if (result.groups.empty() || result.groups.back().score != s.score)
      result.groups.push_back({s.score, 0, 0});
    auto& g = result.groups.back();
    ++g.count;
    g.positives += static_cast<std::size_t>(s.label);
  }
  return result;
}

namespace {

ScoredDataset sample_dataset_impl(const DiscreteDistribution& dist, std::size_t n,
                                  std::uint64_t seed, bool parallel) {
  validate_distribution(dist);
  if (n == 0) throw Error(Errc::empty_dataset, "sample_dataset requires n >= 1");

  std::vector<double> cumulative;
  cumulative.reserve(dist.atoms.size());
  double acc = 0.0;
  for (const auto& atom : dist.atoms) cumulative.push_back(acc += atom.mass);

  ScoredDataset dataset;
  dataset.samples.resize(n);
  const auto draw = [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    const std::size_t j = rng.categorical(cumulative);
    dataset.samples[i] = {dist.atoms[j].f_value,
                          rng.bernoulli(dist.atoms[j].positive_rate) ? 1 : 0};
  };
  if (parallel) {
#pragma omp parallel for schedule(static)
    for (long long i = 0; i < static_cast<long long>(n); ++i) draw(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) draw(i);
  }
  return dataset;
}

}  // namespace

ScoredDataset sample_dataset(const DiscreteDistribution& dist, std::size_t n, std::uint64_t seed) {
  return sample_dataset_impl(dist, n, seed, true);
}

ScoredDataset sample_dataset_serial(const DiscreteDistribution& dist, std::size_t n,
                                    std::uint64_t seed) {
  return sample_dataset_impl(dist, n, seed, false);
}

}  // namespace calib
