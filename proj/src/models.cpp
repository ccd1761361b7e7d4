#include "calib/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "calib/errors.hpp"

namespace calib {

namespace {

double stable_sigmoid(double margin) {
  if (margin >= 0.0) {
    const double e = std::exp(-margin);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(margin);
  return e / (1.0 + e);
}

double clamp_open_unit(double p) {
  if (p >= 1.0) return std::nextafter(1.0, 0.0);
  if (p <= 0.0) return std::nextafter(0.0, 1.0);
  return p;
}

double softplus(double m) {
  if (m > 0.0) return m + std::log1p(std::exp(-m));
  return std::log1p(std::exp(m));
}

std::size_t checked_dimensionality(const std::vector<SparseExample>& examples,
                                   std::size_t declared) {
  std::size_t max_dim = 0;
  for (const auto& ex : examples) {
    if (ex.label != 0 && ex.label != 1)
      throw Error(Errc::invalid_label, "label " + std::to_string(ex.label));
    for (const auto& [idx, val] : ex.features) {
      if (!std::isfinite(val))
        throw Error(Errc::invalid_arguments, "non-finite feature value");
      max_dim = std::max(max_dim, static_cast<std::size_t>(idx) + 1);
    }
  }
  if (declared == 0) return max_dim;
  if (max_dim > declared)
    throw Error(Errc::dimension_mismatch, "feature index " + std::to_string(max_dim - 1) +
                                              " exceeds dimensionality " +
                                              std::to_string(declared));
  return declared;
}

double margin_of(const LogisticModel& model, const SparseExample& example) {
  double m = model.bias;
  for (const auto& [idx, val] : example.features) {
    if (idx >= model.weights.size())
      throw Error(Errc::dimension_mismatch, "feature index " + std::to_string(idx) +
                                                " for model of dimensionality " +
                                                std::to_string(model.weights.size()));
    m += model.weights[idx] * val;
  }
  return m;
}

}  // namespace

std::vector<SparseExample> corpus_examples(const LdaCorpus& corpus) {
  std::vector<SparseExample> examples;
  examples.reserve(corpus.documents.size());
  for (const auto& doc : corpus.documents) {
    SparseExample ex;
    ex.label = doc.label;
    ex.features.reserve(doc.word_counts.size());
    for (const auto& [word, count] : doc.word_counts)
      ex.features.emplace_back(word, static_cast<double>(count));
    examples.push_back(std::move(ex));
  }
  return examples;
}

TrainConfig reference_train_config() {
  TrainConfig config;
  config.learning_rate = 2e-4;
  config.epochs = 120;
  config.l2 = 0.0;
  config.batch_size = 50;
  return config;
}

LogisticModel train_logistic(const std::vector<SparseExample>& examples,
                             const TrainConfig& config, std::size_t dimensionality) {
  if (examples.empty()) throw Error(Errc::empty_training_set, "train_logistic");
  if (!(std::isfinite(config.learning_rate) && config.learning_rate > 0.0))
    throw Error(Errc::invalid_arguments, "learning_rate must be positive");
  if (config.epochs == 0) throw Error(Errc::invalid_arguments, "epochs must be at least 1");
  if (!(std::isfinite(config.l2) && config.l2 >= 0.0))
    throw Error(Errc::invalid_arguments, "l2 must be nonnegative");

  const std::size_t dim = checked_dimensionality(examples, dimensionality);
  const std::size_t n = examples.size();
  const std::size_t batch = config.batch_size == 0 ? n : std::min(config.batch_size, n);

  LogisticModel model;
  model.weights.assign(dim, 0.0);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> grad(dim, 0.0);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (batch < n) {
      Rng rng = Rng::substream(config.seed, epoch);
      for (std::size_t i = n; i > 1; --i)
        std::swap(order[i - 1], order[static_cast<std::size_t>(rng.next_u64() % i)]);
    }
    for (std::size_t start = 0; start < n; start += batch) {
      const std::size_t stop = std::min(start + batch, n);
      const double inv = 1.0 / static_cast<double>(stop - start);
      std::fill(grad.begin(), grad.end(), 0.0);
      double grad_bias = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const SparseExample& ex = examples[order[k]];
        const double g = stable_sigmoid(margin_of(model, ex)) - ex.label;
        grad_bias += g;
        for (const auto& [idx, val] : ex.features) grad[idx] += g * val;
      }
      const double decay = 1.0 - config.learning_rate * config.l2;
      for (std::size_t j = 0; j < dim; ++j)
        model.weights[j] = model.weights[j] * decay - config.learning_rate * inv * grad[j];
      model.bias -= config.learning_rate * inv * grad_bias;
    }
  }
  return model;
}

double predict_logistic(const LogisticModel& model, const SparseExample& example) {
  return clamp_open_unit(stable_sigmoid(margin_of(model, example)));
}

double logistic_loss(const LogisticModel& model,
                     const std::vector<SparseExample>& examples, double l2) {
  if (examples.empty()) throw Error(Errc::empty_training_set, "logistic_loss");
  double loss = 0.0;
  for (const auto& ex : examples) {
    const double m = margin_of(model, ex);
    loss += softplus(m) - ex.label * m;
  }
  loss /= static_cast<double>(examples.size());
  double sq = 0.0;
  for (double w : model.weights) sq += w * w;
  return loss + 0.5 * l2 * sq;
}

NaiveBayesModel train_naive_bayes(const std::vector<SparseExample>& examples,
                                  double smoothing, std::size_t dimensionality) {
  if (examples.empty()) throw Error(Errc::empty_training_set, "train_naive_bayes");
  if (!(std::isfinite(smoothing) && smoothing > 0.0))
    throw Error(Errc::invalid_arguments, "smoothing must be positive");

  const std::size_t dim = checked_dimensionality(examples, dimensionality);
  const std::size_t n = examples.size();

  double class_count[2] = {0.0, 0.0};
  std::vector<double> word_count[2];
  word_count[0].assign(dim, 0.0);
  word_count[1].assign(dim, 0.0);
  double word_total[2] = {0.0, 0.0};
  for (const auto& ex : examples) {
    ++class_count[ex.label];
    for (const auto& [idx, val] : ex.features) {
      word_count[ex.label][idx] += val;
      word_total[ex.label] += val;
    }
  }

  NaiveBayesModel model;
  model.smoothing = smoothing;
  for (int c = 0; c < 2; ++c) {
    model.log_prior[c] =
        std::log((class_count[c] + smoothing) / (static_cast<double>(n) + 2.0 * smoothing));
    model.log_likelihood[c].resize(dim);
    const double denom = word_total[c] + smoothing * static_cast<double>(dim);
    for (std::size_t j = 0; j < dim; ++j)
      model.log_likelihood[c][j] = std::log((word_count[c][j] + smoothing) / denom);
  }
  return model;
}

double predict_naive_bayes(const NaiveBayesModel& model, const SparseExample& example) {
  double lp[2] = {model.log_prior[0], model.log_prior[1]};
  for (const auto& [idx, val] : example.features) {
    if (idx >= model.dimensionality())
      throw Error(Errc::dimension_mismatch, "feature index " + std::to_string(idx) +
                                                " for model of dimensionality " +
                                                std::to_string(model.dimensionality()));
    lp[0] += val * model.log_likelihood[0][idx];
    lp[1] += val * model.log_likelihood[1][idx];
  }
  return clamp_open_unit(stable_sigmoid(lp[1] - lp[0]));
}

std::vector<double> rescale_scores(std::span<const double> raw) {
  if (raw.empty()) throw Error(Errc::empty_input, "rescale_scores");
  for (double v : raw)
    if (!std::isfinite(v)) throw Error(Errc::invalid_arguments, "non-finite score");
  const auto [lo_it, hi_it] = std::minmax_element(raw.begin(), raw.end());
  const double lo = *lo_it, hi = *hi_it;
  if (lo == hi) throw Error(Errc::constant_scores, "all scores equal " + std::to_string(lo));
  std::vector<double> out;
  out.reserve(raw.size());
  for (double v : raw) out.push_back(std::clamp((v - lo) / (hi - lo), 0.0, 1.0));
  return out;
}

}  // namespace calib
