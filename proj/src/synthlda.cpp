#include "calib/synthlda.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "calib/errors.hpp"
#include "calib/io.hpp"

namespace calib {

namespace {

// Substream index space: documents take [0, num_docs), topic
// permutations live far above any plausible document count.
constexpr std::uint64_t kTopicStreamBase = std::uint64_t{1} << 40;

std::vector<std::uint32_t> seeded_permutation(std::size_t size, Rng& rng) {
  std::vector<std::uint32_t> perm(size);
  std::iota(perm.begin(), perm.end(), 0u);
  for (std::size_t i = size; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.next_u64() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

}  // namespace

void validate_config(const LdaConfig& config) {
  if (config.num_docs == 0 || config.num_topics == 0 || config.vocab_size == 0 ||
      config.labels_per_doc == 0)
    throw Error(Errc::invalid_config, "counts must be positive");
  if (!(std::isfinite(config.avg_doc_len) && config.avg_doc_len > 0.0))
    throw Error(Errc::invalid_config, "avg_doc_len must be positive");
  if (config.target_topic >= config.num_topics)
    throw Error(Errc::invalid_config, "target_topic out of range");
  if (!(std::isfinite(config.power_law_exponent) && config.power_law_exponent > 0.0))
    throw Error(Errc::invalid_config, "power_law_exponent must be positive");
}

namespace {

LdaCorpus generate_impl(const LdaConfig& config, bool parallel) {
  validate_config(config);

  LdaCorpus corpus;
  corpus.config = config;

  const std::size_t K = config.num_topics;
  const std::size_t V = config.vocab_size;

  // Shared power-law rank weights; each topic permutes which word holds
  // which rank.
  std::vector<double> rank_prob(V), rank_cum(V);
  double total = 0.0;
  for (std::size_t r = 0; r < V; ++r) {
    rank_prob[r] = std::pow(static_cast<double>(r + 1), -config.power_law_exponent);
    total += rank_prob[r];
  }
  double acc = 0.0;
  for (std::size_t r = 0; r < V; ++r) {
    rank_prob[r] /= total;
    acc += rank_prob[r];
    rank_cum[r] = acc;
  }

  std::vector<std::vector<std::uint32_t>> perms(K);
  corpus.topic_word.assign(K, std::vector<double>(V, 0.0));
  for (std::size_t t = 0; t < K; ++t) {
    Rng rng = Rng::substream(config.seed, kTopicStreamBase + t);
    perms[t] = seeded_permutation(V, rng);
    for (std::size_t r = 0; r < V; ++r) corpus.topic_word[t][perms[t][r]] = rank_prob[r];
  }

  corpus.documents.resize(config.num_docs);

#pragma omp parallel for schedule(static) if (parallel)
  for (long long i = 0; i < static_cast<long long>(config.num_docs); ++i) {
    Rng rng = Rng::substream(config.seed, static_cast<std::uint64_t>(i));
    LdaDocument& doc = corpus.documents[static_cast<std::size_t>(i)];

    doc.theta.resize(K);
    double theta_sum = 0.0;
    for (std::size_t t = 0; t < K; ++t) {
      doc.theta[t] = rng.exponential();
      theta_sum += doc.theta[t];
    }
    std::vector<double> theta_cum(K);
    double c = 0.0;
    for (std::size_t t = 0; t < K; ++t) {
      doc.theta[t] /= theta_sum;
      c += doc.theta[t];
      theta_cum[t] = c;
    }

    std::size_t length = static_cast<std::size_t>(rng.poisson(config.avg_doc_len));
    if (length == 0) length = 1;
    for (std::size_t w = 0; w < length; ++w) {
      const std::size_t topic = rng.categorical(theta_cum);
      const std::size_t rank = rng.categorical(rank_cum);
      ++doc.word_counts[perms[topic][rank]];
    }

    doc.true_prob =
        1.0 - std::pow(1.0 - doc.theta[config.target_topic],
                       static_cast<double>(config.labels_per_doc));
    doc.label = 0;
    for (std::size_t l = 0; l < config.labels_per_doc; ++l) {
      if (rng.categorical(theta_cum) == config.target_topic) doc.label = 1;
    }
  }

  return corpus;
}

}  // namespace

LdaCorpus generate_corpus(const LdaConfig& config) { return generate_impl(config, true); }

LdaCorpus generate_corpus_serial(const LdaConfig& config) {
  return generate_impl(config, false);
}

std::pair<double, double> corpus_baselines(const LdaCorpus& corpus) {
  if (corpus.documents.empty()) throw Error(Errc::empty_corpus, "corpus_baselines");
  const double n = static_cast<double>(corpus.documents.size());
  double freq = 0.0;
  for (const auto& doc : corpus.documents) freq += doc.label;
  freq /= n;
  double l1 = 0.0;
  for (const auto& doc : corpus.documents) l1 += std::abs(freq - doc.true_prob);
  l1 /= n;
  return {freq, l1};
}

void export_corpus(const LdaCorpus& corpus, const std::string& path) {
  const LdaConfig& c = corpus.config;
  std::string out = "# num_docs=" + std::to_string(c.num_docs) +
                    " num_topics=" + std::to_string(c.num_topics) +
                    " vocab_size=" + std::to_string(c.vocab_size) +
                    " avg_doc_len=" + fmt_double(c.avg_doc_len) +
                    " labels_per_doc=" + std::to_string(c.labels_per_doc) +
                    " target_topic=" + std::to_string(c.target_topic) +
                    " power_law_exponent=" + fmt_double(c.power_law_exponent) +
                    " seed=" + std::to_string(c.seed) + "\n";
  for (const auto& doc : corpus.documents) {
    out += std::to_string(doc.label);
    out += ' ';
    out += fmt_double(doc.true_prob);
    for (const auto& [word, count] : doc.word_counts) {
      out += ' ';
      out += std::to_string(word);
      out += ':';
      out += std::to_string(count);
    }
    out += '\n';
  }
  write_file_atomic(path, out);
}

LdaCorpus import_corpus(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;

  LdaCorpus corpus;
  auto fail = [&](const std::string& what) {
    throw Error(Errc::io_failure, path + " line " + std::to_string(line_no) + ": " + what);
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream header(line.substr(1));
      std::string pair;
      while (header >> pair) {
        const auto eq = pair.find('=');
        if (eq == std::string::npos) continue;
        const std::string k = pair.substr(0, eq);
        const std::string v = pair.substr(eq + 1);
        try {
          if (k == "num_docs") corpus.config.num_docs = std::stoull(v);
          else if (k == "num_topics") corpus.config.num_topics = std::stoull(v);
          else if (k == "vocab_size") corpus.config.vocab_size = std::stoull(v);
          else if (k == "avg_doc_len") corpus.config.avg_doc_len = std::stod(v);
          else if (k == "labels_per_doc") corpus.config.labels_per_doc = std::stoull(v);
          else if (k == "target_topic") corpus.config.target_topic = std::stoull(v);
          else if (k == "power_law_exponent") corpus.config.power_law_exponent = std::stod(v);
          else if (k == "seed") corpus.config.seed = std::stoull(v);
        } catch (const std::exception&) {
          fail("bad header value " + pair);
        }
      }
      continue;
    }

    std::istringstream row(line);
    LdaDocument doc;
    double true_prob;
    int label;
    if (!(row >> label >> true_prob)) fail("expected label and true_prob");
    if (label != 0 && label != 1) fail("label must be 0 or 1");
    if (!(true_prob >= 0.0 && true_prob <= 1.0)) fail("true_prob out of [0,1]");
    doc.label = label;
    doc.true_prob = true_prob;
    std::string pair;
    while (row >> pair) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) fail("expected word:count, got " + pair);
      try {
        const unsigned long word = std::stoul(pair.substr(0, colon));
        const unsigned long count = std::stoul(pair.substr(colon + 1));
        if (count == 0) fail("zero count");
        doc.word_counts[static_cast<std::uint32_t>(word)] +=
            static_cast<std::uint32_t>(count);
      } catch (const Error&) {
        throw;
      } catch (const std::exception&) {
        fail("cannot parse " + pair);
      }
    }
    corpus.documents.push_back(std::move(doc));
  }
  if (corpus.documents.empty())
    throw Error(Errc::empty_corpus, path + " holds no documents");
  return corpus;
}

}  // namespace calib
