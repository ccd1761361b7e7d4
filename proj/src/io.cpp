#include "calib/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "calib/errors.hpp"

namespace calib {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_failure, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::io_failure, "cannot read " + path);
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io_failure, "cannot open " + tmp + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw Error(Errc::io_failure, "cannot write " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(Errc::io_failure, "cannot rename " + tmp + " to " + path + ": " +
                                      std::strerror(errno));
  }
}

void JsonWriter::comma() {
  if (fresh_.empty()) return;
  if (fresh_.back())
    fresh_.back() = 0;
  else
    out_ += ',';
}

JsonWriter& JsonWriter::begin_object() {
  comma();
  out_ += '{';
  fresh_.push_back(1);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += '}';
  fresh_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  comma();
  out_ += '[';
  fresh_.push_back(1);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += ']';
  fresh_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(std::string_view name) {
  comma();
  write_string(name);
  out_ += ':';
  if (!fresh_.empty()) fresh_.back() = 1;  // suppress the comma before the value
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  comma();
  if (std::isfinite(v)) {
    out_ += fmt_double(v);
  } else if (std::isinf(v)) {
    out_ += v < 0 ? "\"-inf\"" : "\"inf\"";
  } else {
    out_ += "\"nan\"";
  }
  return *this;
}

JsonWriter& JsonWriter::value(std::int64_t v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(std::uint64_t v) {
  comma();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  comma();
  out_ += v ? "true" : "false";
  return *this;
}

void JsonWriter::write_string(std::string_view v) {
  out_ += '"';
  for (char c : v) {
    switch (c) {
      case '"': out_ += "\\\""; break;
      case '\\': out_ += "\\\\"; break;
      case '\n': out_ += "\\n"; break;
      case '\r': out_ += "\\r"; break;
      case '\t': out_ += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out_ += buf;
        } else {
          out_ += c;
        }
    }
  }
  out_ += '"';
}

JsonWriter& JsonWriter::value(std::string_view v) {
  comma();
  write_string(v);
  return *this;
}

namespace {

bool parse_double_field(const std::string& field, double* out) {
  const char* begin = field.c_str();
  char* end = nullptr;
  errno = 0;
  *out = std::strtod(begin, &end);
  while (end && *end == ' ') ++end;
  return end != begin && end && *end == '\0' && errno != ERANGE;
}

std::string trim(std::string s) {
  const auto from = s.find_first_not_of(" \t\r");
  if (from == std::string::npos) return "";
  const auto to = s.find_last_not_of(" \t\r");
  return s.substr(from, to - from + 1);
}

}  // namespace

namespace {

/// Shared CSV walk; unit_scores additionally pins scores to [0,1] with
/// the offending line number.
std::pair<std::vector<double>, std::vector<double>> parse_scores_csv(const std::string& path,
                                                                     bool unit_scores) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::vector<double> scores, labels;
  std::size_t line_no = 0;
  bool leading = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    if (leading) {
      leading = false;
      std::string lowered = line;
      for (char& c : lowered) c = static_cast<char>(std::tolower(c));
      if (lowered == "score,label") continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw Error(Errc::invalid_arguments,
                  path + " line " + std::to_string(line_no) + ": expected score,label");
    double score, label;
    if (!parse_double_field(trim(line.substr(0, comma)), &score))
      throw Error(Errc::invalid_score,
                  path + " line " + std::to_string(line_no) + ": cannot parse score");
    if (!std::isfinite(score) || (unit_scores && !(score >= 0.0 && score <= 1.0)))
      throw Error(Errc::invalid_score, path + " line " + std::to_string(line_no) +
                                           ": score " + trim(line.substr(0, comma)) +
                                           (unit_scores ? " out of [0,1]" : " not finite"));
    if (!parse_double_field(trim(line.substr(comma + 1)), &label))
      throw Error(Errc::invalid_label,
                  path + " line " + std::to_string(line_no) + ": cannot parse label");
    scores.push_back(score);
    labels.push_back(label);
  }
  if (scores.empty()) throw Error(Errc::empty_dataset, path + " holds no samples");
  return {std::move(scores), std::move(labels)};
}

}  // namespace

ScoredDataset read_dataset_csv(const std::string& path) {
  auto [scores, raw_labels] = parse_scores_csv(path, true);
  const std::vector<int> canonical = canonicalize_labels(raw_labels);
  ScoredDataset dataset = make_dataset(scores, canonical);
  validate_dataset(dataset);
  return dataset;
}

std::pair<std::vector<double>, std::vector<int>> read_raw_scores_csv(const std::string& path) {
  auto [scores, raw_labels] = parse_scores_csv(path, false);
  return {std::move(scores), canonicalize_labels(raw_labels)};
}

std::string dataset_to_csv(const ScoredDataset& dataset) {
  std::string out = "score,label\n";
  for (const auto& s : dataset.samples) {
    out += fmt_double(s.score);
    out += ',';
    out += std::to_string(s.label);
    out += '\n';
  }
  return out;
}

std::string link_to_json(const LinkFunction& link) {
  JsonWriter w;
  w.begin_object();
  w.key("interpolation").value("linear-clamped");
  w.key("knots").begin_array();
  for (const auto& [score, value] : link.knots) {
    w.begin_array().value(score).value(value).end_array();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

LinkFunction link_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_arguments, std::string("link JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("interpolation", "") != "linear-clamped" ||
      !doc.contains("knots") || !doc["knots"].is_array())
    throw Error(Errc::invalid_arguments, "link JSON must have interpolation linear-clamped and a knots array");

  LinkFunction link;
  for (const auto& knot : doc["knots"]) {
    if (!knot.is_array() || knot.size() != 2 || !knot[0].is_number() || !knot[1].is_number())
      throw Error(Errc::invalid_arguments, "link knot must be a [score, value] pair");
    link.knots.emplace_back(knot[0].get<double>(), knot[1].get<double>());
  }
  if (link.knots.empty()) throw Error(Errc::invalid_arguments, "link JSON holds no knots");
  for (std::size_t i = 0; i < link.knots.size(); ++i) {
    const auto& [score, value] = link.knots[i];
    if (!(score >= 0.0 && score <= 1.0) || !(value >= 0.0 && value <= 1.0))
      throw Error(Errc::invalid_arguments, "link knots must lie in [0,1]");
    if (i > 0 && !(link.knots[i - 1].first < score))
      throw Error(Errc::invalid_arguments, "link knot scores must be strictly ascending");
    if (i > 0 && !(link.knots[i - 1].second <= value))
      throw Error(Errc::invalid_arguments, "link knot values must be nondecreasing");
  }
  return link;
}

std::string logistic_to_json(const LogisticModel& model) {
  JsonWriter w;
  w.begin_object();
  w.key("model").value("logistic");
  w.key("dimensionality").value(static_cast<std::uint64_t>(model.weights.size()));
  w.key("bias").value(model.bias);
  w.key("weights").begin_array();
  for (std::size_t j = 0; j < model.weights.size(); ++j) {
    if (model.weights[j] == 0.0) continue;
    w.begin_array().value(static_cast<std::uint64_t>(j)).value(model.weights[j]).end_array();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

LogisticModel logistic_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_arguments, std::string("model JSON: ") + e.what());
  }
  if (doc.value("model", "") != "logistic")
    throw Error(Errc::invalid_arguments, "model JSON is not a logistic model");
  LogisticModel model;
  model.weights.assign(doc.value("dimensionality", std::size_t{0}), 0.0);
  model.bias = doc.value("bias", 0.0);
  for (const auto& entry : doc.value("weights", nlohmann::json::array())) {
    if (!entry.is_array() || entry.size() != 2)
      throw Error(Errc::invalid_arguments, "weight entry must be an [index, value] pair");
    const std::size_t idx = entry[0].get<std::size_t>();
    if (idx >= model.weights.size())
      throw Error(Errc::dimension_mismatch, "weight index beyond dimensionality");
    model.weights[idx] = entry[1].get<double>();
  }
  return model;
}

std::string naive_bayes_to_json(const NaiveBayesModel& model) {
  JsonWriter w;
  w.begin_object();
  w.key("model").value("naive_bayes");
  w.key("smoothing").value(model.smoothing);
  w.key("log_prior").begin_array().value(model.log_prior[0]).value(model.log_prior[1]).end_array();
  w.key("log_likelihood").begin_array();
  for (int c = 0; c < 2; ++c) {
    w.begin_array();
    for (double v : model.log_likelihood[c]) w.value(v);
    w.end_array();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

NaiveBayesModel naive_bayes_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::invalid_arguments, std::string("model JSON: ") + e.what());
  }
  if (doc.value("model", "") != "naive_bayes")
    throw Error(Errc::invalid_arguments, "model JSON is not a naive_bayes model");
  NaiveBayesModel model;
  model.smoothing = doc.value("smoothing", 1.0);
  const auto prior = doc.value("log_prior", nlohmann::json::array());
  const auto lik = doc.value("log_likelihood", nlohmann::json::array());
  if (prior.size() != 2 || lik.size() != 2)
    throw Error(Errc::invalid_arguments, "model JSON needs 2 priors and 2 likelihood rows");
  model.log_prior[0] = prior[0].get<double>();
  model.log_prior[1] = prior[1].get<double>();
  for (int c = 0; c < 2; ++c) {
    model.log_likelihood[c].reserve(lik[c].size());
    for (const auto& v : lik[c]) model.log_likelihood[c].push_back(v.get<double>());
  }
  if (model.log_likelihood[0].size() != model.log_likelihood[1].size())
    throw Error(Errc::invalid_arguments, "likelihood rows differ in length");
  return model;
}

std::vector<SparseExample> read_sparse_examples(const std::string& path) {
  const std::string text = read_file(path);
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  std::vector<SparseExample> examples;
  std::vector<double> raw_labels;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    double label;
    if (!(row >> label))
      throw Error(Errc::invalid_label,
                  path + " line " + std::to_string(line_no) + ": cannot parse label");
    SparseExample ex;
    std::string pair;
    while (row >> pair) {
      const auto colon = pair.find(':');
      double value;
      if (colon == std::string::npos || !parse_double_field(pair.substr(colon + 1), &value))
        throw Error(Errc::invalid_arguments, path + " line " + std::to_string(line_no) +
                                                 ": expected idx:val, got " + pair);
      try {
        ex.features.emplace_back(
            static_cast<std::uint32_t>(std::stoul(pair.substr(0, colon))), value);
      } catch (const std::exception&) {
        throw Error(Errc::invalid_arguments, path + " line " + std::to_string(line_no) +
                                                 ": bad feature index in " + pair);
      }
    }
    std::sort(ex.features.begin(), ex.features.end());
    raw_labels.push_back(label);
    examples.push_back(std::move(ex));
  }
  if (examples.empty()) throw Error(Errc::empty_training_set, path + " holds no examples");
  const std::vector<int> canonical = canonicalize_labels(raw_labels);
  for (std::size_t i = 0; i < examples.size(); ++i) examples[i].label = canonical[i];
  return examples;
}

}  // namespace calib
