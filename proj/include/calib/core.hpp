#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "calib/errors.hpp"

namespace calib {

/// One scored sample: classifier output in [0,1] and its binary label.
/// Labels are stored canonically as {0,1}; inputs in the {-1,+1}
/// convention go through canonicalize_labels first.
struct LabeledScore {
  double score;
  int label;
};

struct ScoredDataset {
  std::vector<LabeledScore> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
};

/// Samples pooled by exact score equality. Intervals (p1, p2] over
/// f-values select whole groups, so every sup over interval endpoints
/// runs on these.
struct ScoreGroup {
  double score;
  std::size_t count;
  std::size_t positives;
};

struct SortedGroups {
  std::vector<ScoreGroup> groups;  // strictly ascending by score
  std::size_t total = 0;           // total sample count
};

/// Explicit finite distribution: each atom is a region of feature space
/// where f outputs f_value, with probability `mass` and conditional
/// positive rate P(Y=1 | region).
struct DiscreteAtom {
  double f_value;
  double mass;
  double positive_rate;
};

struct DiscreteDistribution {
  std::vector<DiscreteAtom> atoms;  // strictly ascending by f_value
};

/// Throws Error(invalid_score / invalid_label) on the first bad sample.
void validate_dataset(const ScoredDataset& dataset);

/// Masses sum to 1 within 1e-12, f_values strictly ascending, all fields
/// in range. Throws Error(invalid_distribution).
void validate_distribution(const DiscreteDistribution& dist);

ScoredDataset make_dataset(std::span<const double> scores, std::span<const int> labels);

/// Maps {-1,+1} or {0,1} labels to {0,1}. Mixing -1 and 0 in one input is
/// an error (the conventions would be ambiguous), as is any other value.
std::vector<int> canonicalize_labels(std::span<const double> raw_labels);

/// Pools the dataset by exact score equality; ties in the sort are broken
/// by original index, which tie pooling then makes irrelevant.
SortedGroups group_by_score(const ScoredDataset& dataset);

/// n i.i.d. draws: atom by mass, label Bernoulli(positive_rate). Sample i
/// uses substream (seed, i), so the output is identical for any thread
/// count.
ScoredDataset sample_dataset(const DiscreteDistribution& dist, std::size_t n, std::uint64_t seed);

/// Serial reference for sample_dataset; must produce identical output.
ScoredDataset sample_dataset_serial(const DiscreteDistribution& dist, std::size_t n,
                                    std::uint64_t seed);

}  // namespace calib
