#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "calib/core.hpp"
#include "calib/models.hpp"
#include "calib/pav.hpp"

namespace calib {

/// Shortest round-trip formatting: 17 significant digits, "%.17g".
std::string fmt_double(double v);

std::string read_file(const std::string& path);

/// Writes to a sibling temp file, then renames; no partial files remain
/// on failure.
void write_file_atomic(const std::string& path, std::string_view content);

/// Incremental JSON emitter with caller-fixed key order. Doubles print
/// at 17 significant digits; infinities print as the strings "-inf" and
/// "inf" so reports stay parseable.
class JsonWriter {
 public:
  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(double v);
  JsonWriter& value(std::int64_t v);
  JsonWriter& value(std::uint64_t v);
  JsonWriter& value(int v) { return value(static_cast<std::int64_t>(v)); }
  JsonWriter& value(bool v);
  JsonWriter& value(std::string_view v);
  JsonWriter& value(const char* v) { return value(std::string_view(v)); }

  const std::string& str() const { return out_; }

 private:
  void comma();
  void write_string(std::string_view v);
  std::string out_;
  std::vector<char> fresh_;
};

/// CSV with a `score,label` header; labels 0/1 or -1/+1. A malformed or
/// invalid row aborts with its line number in the message.
ScoredDataset read_dataset_csv(const std::string& path);
std::string dataset_to_csv(const ScoredDataset& dataset);

std::string link_to_json(const LinkFunction& link);
LinkFunction link_from_json(const std::string& text);

std::string logistic_to_json(const LogisticModel& model);
LogisticModel logistic_from_json(const std::string& text);
std::string naive_bayes_to_json(const NaiveBayesModel& model);
NaiveBayesModel naive_bayes_from_json(const std::string& text);

/// One example per line: `label idx:val idx:val ...`; labels 0/1 or
/// -1/+1; `#` lines are comments.
std::vector<SparseExample> read_sparse_examples(const std::string& path);

/// CSV like read_dataset_csv but with unconstrained finite scores, for
/// rescaling external model outputs.
std::pair<std::vector<double>, std::vector<int>> read_raw_scores_csv(const std::string& path);

}  // namespace calib
