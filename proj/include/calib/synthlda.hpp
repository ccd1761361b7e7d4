#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "calib/rng.hpp"

namespace calib {

struct LdaConfig {
  std::size_t num_docs = 20000;
  std::size_t num_topics = 20;
  std::size_t vocab_size = 1000;
  double avg_doc_len = 200.0;
  std::size_t labels_per_doc = 10;
  std::size_t target_topic = 0;
  double power_law_exponent = 1.0;
  std::uint64_t seed = kDefaultSeed;
};

void validate_config(const LdaConfig& config);

struct LdaDocument {
  std::map<std::uint32_t, std::uint32_t> word_counts;
  std::vector<double> theta;
  double true_prob = 0.0;
  int label = 0;
};

struct LdaCorpus {
  LdaConfig config;
  std::vector<std::vector<double>> topic_word;
  std::vector<LdaDocument> documents;
};

LdaCorpus generate_corpus(const LdaConfig& config);
LdaCorpus generate_corpus_serial(const LdaConfig& config);

/// (label_frequency, trivial_l1): the mean label and the l1 error of the
/// constant predictor equal to that mean.
std::pair<double, double> corpus_baselines(const LdaCorpus& corpus);

/// One document per line: label, true_prob, word:count pairs; a header
/// comment carries the config. Probabilities round-trip bit-exactly.
void export_corpus(const LdaCorpus& corpus, const std::string& path);

/// Reads the export format back. Latent topic mixtures and the
/// topic-word matrix are not part of the file, so documents come back
/// with empty theta and the corpus with an empty topic_word.
LdaCorpus import_corpus(const std::string& path);

}  // namespace calib
