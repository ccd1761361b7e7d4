#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "calib/rng.hpp"
#include "calib/synthlda.hpp"

namespace calib {

struct SparseExample {
  std::vector<std::pair<std::uint32_t, double>> features;  // ascending indices
  int label = 0;
};

struct LogisticModel {
  std::vector<double> weights;
  double bias = 0.0;

  std::size_t dimensionality() const { return weights.size(); }
};

struct NaiveBayesModel {
  double log_prior[2] = {0.0, 0.0};
  std::vector<double> log_likelihood[2];
  double smoothing = 1.0;

  std::size_t dimensionality() const { return log_likelihood[0].size(); }
};

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 30;
  double l2 = 1e-4;
  std::size_t batch_size = 0;  // 0 = full batch
  std::uint64_t seed = kDefaultSeed;
};

/// Hyperparameters tuned for logistic regression on the default
/// synthetic corpus (raw counts, 20 topics, 1000 words).
TrainConfig reference_train_config();

/// Bag-of-words view of a corpus: feature index = word index, value =
/// count, dimensionality = vocab_size.
std::vector<SparseExample> corpus_examples(const LdaCorpus& corpus);

/// L2-regularized logistic regression by (mini-batch) gradient descent
/// with seeded shuffling. dimensionality 0 means infer from the data.
LogisticModel train_logistic(const std::vector<SparseExample>& examples,
                             const TrainConfig& config, std::size_t dimensionality = 0);

double predict_logistic(const LogisticModel& model, const SparseExample& example);

/// Mean negative log-likelihood plus (l2/2)|w|^2, the quantity training
/// descends.
double logistic_loss(const LogisticModel& model,
                     const std::vector<SparseExample>& examples, double l2);

NaiveBayesModel train_naive_bayes(const std::vector<SparseExample>& examples,
                                  double smoothing, std::size_t dimensionality = 0);

double predict_naive_bayes(const NaiveBayesModel& model, const SparseExample& example);

/// Affine map sending min -> 0 and max -> 1.
std::vector<double> rescale_scores(std::span<const double> raw);

}  // namespace calib
