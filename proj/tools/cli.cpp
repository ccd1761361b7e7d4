#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "calib/complexity.hpp"
#include "calib/decision.hpp"
#include "calib/errors.hpp"
#include "calib/io.hpp"
#include "calib/measure.hpp"
#include "calib/models.hpp"
#include "calib/pav.hpp"
#include "calib/rng.hpp"
#include "calib/synthlda.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using calib::Errc;
using calib::Error;
using calib::JsonWriter;

using FlagList = std::vector<std::pair<std::string, std::string>>;

std::string flag_str(double v) { return calib::fmt_double(v); }
std::string flag_str(bool v) { return v ? "true" : "false"; }
std::string flag_str(std::size_t v) { return std::to_string(v); }

JsonWriter start_report(const std::string& command, const FlagList& flags,
                        std::uint64_t seed) {
  JsonWriter w;
  w.begin_object();
  w.key("tool").value("calib");
  w.key("version").value(kVersion);
  w.key("command").value(command);
  w.key("flags").begin_object();
  for (const auto& [k, v] : flags) w.key(k).value(v);
  w.end_object();
  w.key("seed").value(seed);
  return w;
}

void emit_report(const std::string& output_path, const std::string& json) {
  if (output_path.empty()) {
    std::cout << json << "\n";
  } else {
    calib::write_file_atomic(output_path, json + "\n");
  }
}

std::vector<double> parse_grid(const std::string& csv) {
  std::vector<double> grid;
  std::size_t from = 0;
  while (from <= csv.size()) {
    const auto to = csv.find(',', from);
    const std::string field =
        csv.substr(from, to == std::string::npos ? std::string::npos : to - from);
    if (!field.empty()) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str() || *end != '\0')
        throw Error(Errc::invalid_arguments, "cannot parse grid value " + field);
      grid.push_back(v);
    }
    if (to == std::string::npos) break;
    from = to + 1;
  }
  if (grid.empty()) throw Error(Errc::empty_grid, "grid is empty");
  return grid;
}

struct CommonOpts {
  std::string output;
  std::string emit_csv;
  std::uint64_t seed = calib::kDefaultSeed;
};

void add_common(CLI::App* sub, CommonOpts* opts) {
  sub->add_option("--output", opts->output, "write the JSON report here instead of stdout");
  sub->add_option("--emit-csv", opts->emit_csv, "write a flattened CSV of the report here");
  sub->add_option("--seed", opts->seed, "RNG seed recorded in the report");
}

void finish(const CommonOpts& opts, JsonWriter& report, const std::string& csv) {
  report.end_object();
  emit_report(opts.output, report.str());
  if (!opts.emit_csv.empty()) calib::write_file_atomic(opts.emit_csv, csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"calibration measure and recalibration toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // measure
  auto* c_measure = app.add_subcommand("measure", "empirical calibration measure of a CSV");
  struct {
    std::string input;
    bool brute = false;
    CommonOpts common;
  } o_measure;
  c_measure->add_option("--input", o_measure.input, "score,label CSV")->required();
  c_measure->add_flag("--brute-force", o_measure.brute, "use the quadratic reference scan");
  add_common(c_measure, &o_measure.common);

  // calibrate
  auto* c_calibrate = app.add_subcommand("calibrate", "fit the isotonic recalibration map");
  struct {
    std::string train;
    std::string emit_link;
    CommonOpts common;
  } o_calibrate;
  c_calibrate->add_option("--train", o_calibrate.train, "score,label CSV to fit on")->required();
  c_calibrate->add_option("--emit-link", o_calibrate.emit_link, "write the link JSON here");
  add_common(c_calibrate, &o_calibrate.common);

  // apply
  auto* c_apply = app.add_subcommand("apply", "apply a link JSON to a CSV");
  struct {
    std::string link;
    std::string input;
    CommonOpts common;
  } o_apply;
  c_apply->add_option("--link", o_apply.link, "link JSON path")->required();
  c_apply->add_option("--input", o_apply.input, "score,label CSV")->required();
  add_common(c_apply, &o_apply.common);

  // decide
  auto* c_decide = app.add_subcommand("decide", "cost-sensitive decision losses");
  struct {
    std::string input;
    double fp_cost = 1.0;
    double fn_cost = 1.0;
    std::vector<double> thresholds;
    CommonOpts common;
  } o_decide;
  c_decide->add_option("--input", o_decide.input, "score,label CSV")->required();
  c_decide->add_option("--fp-cost", o_decide.fp_cost, "cost per false positive");
  c_decide->add_option("--fn-cost", o_decide.fn_cost, "cost per false negative");
  c_decide->add_option("--threshold", o_decide.thresholds,
                       "decision threshold(s); default is the optimal a/(a+b)");
  add_common(c_decide, &o_decide.common);

  // loss-ratio
  auto* c_ratio = app.add_subcommand("loss-ratio", "calibrated/raw loss ratio experiment");
  struct {
    std::string validation;
    std::string test;
    std::string p_grid = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9";
    CommonOpts common;
  } o_ratio;
  c_ratio->add_option("--validation", o_ratio.validation, "CSV the link is fitted on")
      ->required();
  c_ratio->add_option("--test", o_ratio.test, "CSV the losses are measured on")->required();
  c_ratio->add_option("--p-grid", o_ratio.p_grid, "comma-separated p values in (0,1)");
  add_common(c_ratio, &o_ratio.common);

  // rademacher
  auto* c_rad = app.add_subcommand("rademacher", "interval-class Rademacher estimate");
  struct {
    std::string input;
    std::string klass = "H";
    std::size_t num_sigma = 4096;
    bool serial = false;
    CommonOpts common;
  } o_rad;
  c_rad->add_option("--input", o_rad.input, "score,label CSV")->required();
  c_rad->add_option("--class", o_rad.klass, "H, H1, or H2");
  c_rad->add_option("--num-sigma", o_rad.num_sigma, "sign vectors to sample");
  c_rad->add_flag("--serial", o_rad.serial, "use the single-threaded reference path");
  add_common(c_rad, &o_rad.common);

  // bound
  auto* c_bound = app.add_subcommand("bound", "closed-form bounds");
  struct {
    bool theorem2 = false;
    bool finite_output = false;
    double rademacher = 0.0;
    std::size_t n = 0;
    double delta = 0.05;
    std::size_t d = 0;
    std::size_t pstar = 0;
    CommonOpts common;
  } o_bound;
  c_bound->add_flag("--theorem2", o_bound.theorem2, "uniform-convergence epsilon");
  c_bound->add_flag("--finite-output", o_bound.finite_output, "finite-output-set bound");
  c_bound->add_option("--rademacher", o_bound.rademacher, "Rademacher estimate (theorem2)");
  c_bound->add_option("--n", o_bound.n, "sample size");
  c_bound->add_option("--delta", o_bound.delta, "confidence parameter (theorem2)");
  c_bound->add_option("--d", o_bound.d, "output-set size parameter (finite-output)");
  c_bound->add_option("--pstar", o_bound.pstar, "candidate-set size (finite-output)");
  add_common(c_bound, &o_bound.common);

  // simulate-lda
  auto* c_lda = app.add_subcommand("simulate-lda", "generate the synthetic topic-model corpus");
  struct {
    calib::LdaConfig config;
    std::string corpus_out;
    bool serial = false;
    CommonOpts common;
  } o_lda;
  c_lda->add_option("--num-docs", o_lda.config.num_docs, "documents to generate");
  c_lda->add_option("--num-topics", o_lda.config.num_topics, "topic count");
  c_lda->add_option("--vocab-size", o_lda.config.vocab_size, "vocabulary size");
  c_lda->add_option("--avg-doc-len", o_lda.config.avg_doc_len, "mean document length");
  c_lda->add_option("--labels-per-doc", o_lda.config.labels_per_doc,
                    "topic draws deciding the label");
  c_lda->add_option("--target-topic", o_lda.config.target_topic, "topic defining Y=1");
  c_lda->add_option("--power-law-exponent", o_lda.config.power_law_exponent,
                    "word-frequency decay exponent");
  c_lda->add_option("--corpus-out", o_lda.corpus_out, "write the corpus file here");
  c_lda->add_flag("--serial", o_lda.serial, "use the single-threaded reference path");
  add_common(c_lda, &o_lda.common);

  // train
  auto* c_train = app.add_subcommand("train", "train a scorer on a corpus or sparse file");
  struct {
    std::string corpus;
    std::string sparse;
    std::string model = "logistic";
    double lr = 0.1;
    std::size_t epochs = 30;
    double l2 = 1e-4;
    std::size_t batch = 0;
    double smoothing = 1.0;
    std::size_t dim = 0;
    std::string emit_model;
    CommonOpts common;
  } o_train;
  c_train->add_option("--corpus", o_train.corpus, "corpus file from simulate-lda");
  c_train->add_option("--sparse", o_train.sparse, "generic `label idx:val ...` file");
  c_train->add_option("--model", o_train.model, "logistic or naive-bayes");
  c_train->add_option("--lr", o_train.lr, "learning rate (logistic)");
  c_train->add_option("--epochs", o_train.epochs, "training epochs (logistic)");
  c_train->add_option("--l2", o_train.l2, "L2 strength (logistic)");
  c_train->add_option("--batch", o_train.batch, "mini-batch size, 0 = full (logistic)");
  c_train->add_option("--smoothing", o_train.smoothing, "Laplace smoothing (naive-bayes)");
  c_train->add_option("--dim", o_train.dim, "feature dimensionality, 0 = infer");
  c_train->add_option("--emit-model", o_train.emit_model, "write the model JSON here");
  add_common(c_train, &o_train.common);

  // rescale
  auto* c_rescale = app.add_subcommand("rescale", "affine-map external scores into [0,1]");
  struct {
    std::string input;
    CommonOpts common;
  } o_rescale;
  c_rescale->add_option("--input", o_rescale.input, "score,label CSV with unbounded scores")
      ->required();
  add_common(c_rescale, &o_rescale.common);

  // reproduce-table1
  auto* c_table1 = app.add_subcommand(
      "reproduce-table1", "end-to-end corpus + logistic run with reference values");
  struct {
    CommonOpts common;
  } o_table1;
  add_common(c_table1, &o_table1.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  const std::string command = app.get_subcommands().front()->get_name();

  try {
    if (*c_measure) {
      const auto& o = o_measure;
      FlagList flags{{"input", o.input},
                     {"brute-force", flag_str(o.brute)},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      const calib::ScoredDataset data = calib::read_dataset_csv(o.input);
      const calib::CalibrationReport rep =
          o.brute ? calib::empirical_calibration_bruteforce(data)
                  : calib::empirical_calibration(data);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("n").value(static_cast<std::uint64_t>(rep.n));
      w.key("c_emp").value(rep.c_emp);
      w.key("worst_interval").begin_object();
      w.key("p1").value(rep.worst_interval.p1);
      w.key("p2").value(rep.worst_interval.p2);
      w.key("deviation").value(rep.worst_interval.signed_deviation);
      w.end_object();
      std::string csv = "key,value\n";
      csv += "n," + std::to_string(rep.n) + "\n";
      csv += "c_emp," + calib::fmt_double(rep.c_emp) + "\n";
      csv += "p1," + calib::fmt_double(rep.worst_interval.p1) + "\n";
      csv += "p2," + calib::fmt_double(rep.worst_interval.p2) + "\n";
      csv += "deviation," + calib::fmt_double(rep.worst_interval.signed_deviation) + "\n";
      finish(o.common, w, csv);
    } else if (*c_calibrate) {
      const auto& o = o_calibrate;
      FlagList flags{{"train", o.train},
                     {"emit-link", o.emit_link},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      const calib::ScoredDataset data = calib::read_dataset_csv(o.train);
      const calib::IsotonicFit fit = calib::fit_pav(data);
      const calib::LinkFunction link = calib::build_link(fit, data);
      std::vector<double> scores;
      std::vector<int> labels;
      for (const auto& s : data.samples) {
        scores.push_back(s.score);
        labels.push_back(s.label);
      }
      const std::vector<double> calibrated = calib::apply_link(link, scores);
      const calib::ScoredDataset after = calib::make_dataset(calibrated, labels);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("n").value(static_cast<std::uint64_t>(data.size()));
      w.key("c_emp_before").value(calib::empirical_calibration(data).c_emp);
      w.key("c_emp_after").value(calib::empirical_calibration(after).c_emp);
      w.key("knots").begin_array();
      for (const auto& [s, v] : link.knots) w.begin_array().value(s).value(v).end_array();
      w.end_array();
      if (!o.emit_link.empty())
        calib::write_file_atomic(o.emit_link, calib::link_to_json(link) + "\n");
      finish(o.common, w, calib::dataset_to_csv(after));
    } else if (*c_apply) {
      const auto& o = o_apply;
      FlagList flags{{"link", o.link},
                     {"input", o.input},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      const calib::LinkFunction link = calib::link_from_json(calib::read_file(o.link));
      const calib::ScoredDataset data = calib::read_dataset_csv(o.input);
      std::vector<double> scores;
      std::vector<int> labels;
      for (const auto& s : data.samples) {
        scores.push_back(s.score);
        labels.push_back(s.label);
      }
      const std::vector<double> calibrated = calib::apply_link(link, scores);
      const calib::ScoredDataset after = calib::make_dataset(calibrated, labels);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("n").value(static_cast<std::uint64_t>(after.size()));
      w.key("c_emp").value(calib::empirical_calibration(after).c_emp);
      finish(o.common, w, calib::dataset_to_csv(after));
    } else if (*c_decide) {
      const auto& o = o_decide;
      std::string joined;
      for (double t : o.thresholds) {
        if (!joined.empty()) joined += ',';
        joined += calib::fmt_double(t);
      }
      FlagList flags{{"input", o.input},
                     {"fp-cost", flag_str(o.fp_cost)},
                     {"fn-cost", flag_str(o.fn_cost)},
                     {"threshold", joined},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      const calib::ScoredDataset data = calib::read_dataset_csv(o.input);
      const calib::CostPair costs{o.fp_cost, o.fn_cost};
      const double bayes = calib::bayes_threshold(costs);
      std::vector<double> thresholds = o.thresholds;
      if (thresholds.empty()) thresholds.push_back(bayes);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("costs").begin_object();
      w.key("a").value(costs.a);
      w.key("b").value(costs.b);
      w.end_object();
      w.key("bayes_threshold").value(bayes);
      w.key("summaries").begin_array();
      std::string csv = "threshold,fp,fn,total_loss,mean_loss\n";
      for (double t : thresholds) {
        const calib::LossSummary s = calib::empirical_loss(data, t, costs);
        w.begin_object();
        w.key("threshold").value(s.threshold);
        w.key("fp").value(static_cast<std::uint64_t>(s.fp));
        w.key("fn").value(static_cast<std::uint64_t>(s.fn));
        w.key("total_loss").value(s.total_loss);
        w.key("mean_loss").value(s.mean_loss);
        w.end_object();
        csv += calib::fmt_double(s.threshold) + "," + std::to_string(s.fp) + "," +
               std::to_string(s.fn) + "," + calib::fmt_double(s.total_loss) + "," +
               calib::fmt_double(s.mean_loss) + "\n";
      }
      w.end_array();
      finish(o.common, w, csv);
    } else if (*c_ratio) {
      const auto& o = o_ratio;
      FlagList flags{{"validation", o.validation},
                     {"test", o.test},
                     {"p-grid", o.p_grid},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      const calib::ScoredDataset val = calib::read_dataset_csv(o.validation);
      const calib::ScoredDataset test = calib::read_dataset_csv(o.test);
      const std::vector<double> grid = parse_grid(o.p_grid);
      const auto points = calib::loss_ratio_experiment(val, test, grid);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("points").begin_array();
      std::string csv = "p,ratio\n";
      for (const auto& [p, ratio] : points) {
        w.begin_array().value(p).value(ratio).end_array();
        csv += calib::fmt_double(p) + "," + calib::fmt_double(ratio) + "\n";
      }
      w.end_array();
      finish(o.common, w, csv);
    } else if (*c_rad) {
      const auto& o = o_rad;
      FlagList flags{{"input", o.input},
                     {"class", o.klass},
                     {"num-sigma", flag_str(o.num_sigma)},
                     {"serial", flag_str(o.serial)},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      calib::IntervalClass variant;
      if (o.klass == "H") variant = calib::IntervalClass::H;
      else if (o.klass == "H1") variant = calib::IntervalClass::H1;
      else if (o.klass == "H2") variant = calib::IntervalClass::H2;
      else throw Error(Errc::invalid_arguments, "--class must be H, H1, or H2");
      const calib::ScoredDataset data = calib::read_dataset_csv(o.input);
      const calib::RademacherEstimate est =
          o.serial ? calib::estimate_interval_rademacher_serial(data, variant, o.num_sigma,
                                                                o.common.seed)
                   : calib::estimate_interval_rademacher(data, variant, o.num_sigma,
                                                         o.common.seed);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("class").value(calib::interval_class_name(est.class_variant));
      w.key("mean").value(est.mean);
      w.key("std_error").value(est.std_error);
      w.key("num_sigma").value(static_cast<std::uint64_t>(est.num_sigma));
      w.key("exact").value(est.exact);
      std::string csv = "key,value\n";
      csv += std::string("class,") + calib::interval_class_name(est.class_variant) + "\n";
      csv += "mean," + calib::fmt_double(est.mean) + "\n";
      csv += "std_error," + calib::fmt_double(est.std_error) + "\n";
      csv += "num_sigma," + std::to_string(est.num_sigma) + "\n";
      csv += std::string("exact,") + (est.exact ? "true" : "false") + "\n";
      finish(o.common, w, csv);
    } else if (*c_bound) {
      const auto& o = o_bound;
      FlagList flags{{"theorem2", flag_str(o.theorem2)},
                     {"finite-output", flag_str(o.finite_output)},
                     {"rademacher", flag_str(o.rademacher)},
                     {"n", flag_str(o.n)},
                     {"delta", flag_str(o.delta)},
                     {"d", flag_str(o.d)},
                     {"pstar", flag_str(o.pstar)},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      if (o.theorem2 == o.finite_output)
        throw Error(Errc::invalid_arguments,
                    "pass exactly one of --theorem2 and --finite-output");
      JsonWriter w = start_report(command, flags, o.common.seed);
      std::string csv = "key,value\n";
      if (o.theorem2) {
        const double eps = calib::theorem2_epsilon(o.rademacher, o.n, o.delta);
        w.key("kind").value("theorem2");
        w.key("rademacher").value(o.rademacher);
        w.key("n").value(static_cast<std::uint64_t>(o.n));
        w.key("delta").value(o.delta);
        w.key("epsilon").value(eps);
        csv += "kind,theorem2\nepsilon," + calib::fmt_double(eps) + "\n";
      } else {
        const double b = calib::finite_output_bound(o.d, o.n, o.pstar);
        w.key("kind").value("finite-output");
        w.key("d").value(static_cast<std::uint64_t>(o.d));
        w.key("n").value(static_cast<std::uint64_t>(o.n));
        w.key("pstar").value(static_cast<std::uint64_t>(o.pstar));
        w.key("bound").value(b);
        csv += "kind,finite-output\nbound," + calib::fmt_double(b) + "\n";
      }
      finish(o.common, w, csv);
    } else if (*c_lda) {
      auto o = o_lda;
      o.config.seed = o.common.seed;
      FlagList flags{{"num-docs", flag_str(o.config.num_docs)},
                     {"num-topics", flag_str(o.config.num_topics)},
                     {"vocab-size", flag_str(o.config.vocab_size)},
                     {"avg-doc-len", flag_str(o.config.avg_doc_len)},
                     {"labels-per-doc", flag_str(o.config.labels_per_doc)},
                     {"target-topic", flag_str(o.config.target_topic)},
                     {"power-law-exponent", flag_str(o.config.power_law_exponent)},
                     {"corpus-out", o.corpus_out},
                     {"serial", flag_str(o.serial)},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      const calib::LdaCorpus corpus =
          o.serial ? calib::generate_corpus_serial(o.config) : calib::generate_corpus(o.config);
      const auto [freq, trivial_l1] = calib::corpus_baselines(corpus);
      double mean_true = 0.0;
      for (const auto& doc : corpus.documents) mean_true += doc.true_prob;
      mean_true /= static_cast<double>(corpus.documents.size());
      if (!o.corpus_out.empty()) calib::export_corpus(corpus, o.corpus_out);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("num_docs").value(static_cast<std::uint64_t>(corpus.documents.size()));
      w.key("label_frequency").value(freq);
      w.key("trivial_l1").value(trivial_l1);
      w.key("mean_true_prob").value(mean_true);
      std::string csv = "label,true_prob\n";
      for (const auto& doc : corpus.documents)
        csv += std::to_string(doc.label) + "," + calib::fmt_double(doc.true_prob) + "\n";
      finish(o.common, w, csv);
    } else if (*c_train) {
      const auto& o = o_train;
      FlagList flags{{"corpus", o.corpus},
                     {"sparse", o.sparse},
                     {"model", o.model},
                     {"lr", flag_str(o.lr)},
                     {"epochs", flag_str(o.epochs)},
                     {"l2", flag_str(o.l2)},
                     {"batch", flag_str(o.batch)},
                     {"smoothing", flag_str(o.smoothing)},
                     {"dim", flag_str(o.dim)},
                     {"emit-model", o.emit_model},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      if (o.corpus.empty() == o.sparse.empty())
        throw Error(Errc::invalid_arguments, "pass exactly one of --corpus and --sparse");
      std::vector<calib::SparseExample> examples;
      std::vector<double> true_probs;
      std::size_t dim = o.dim;
      if (!o.corpus.empty()) {
        const calib::LdaCorpus corpus = calib::import_corpus(o.corpus);
        examples = calib::corpus_examples(corpus);
        for (const auto& doc : corpus.documents) true_probs.push_back(doc.true_prob);
        if (dim == 0) dim = corpus.config.vocab_size;
      } else {
        examples = calib::read_sparse_examples(o.sparse);
      }

      std::vector<double> predictions;
      predictions.reserve(examples.size());
      std::string model_json;
      double final_loss = 0.0;
      if (o.model == "logistic") {
        calib::TrainConfig config;
        config.learning_rate = o.lr;
        config.epochs = o.epochs;
        config.l2 = o.l2;
        config.batch_size = o.batch;
        config.seed = o.common.seed;
        const calib::LogisticModel model = calib::train_logistic(examples, config, dim);
        for (const auto& ex : examples) predictions.push_back(calib::predict_logistic(model, ex));
        final_loss = calib::logistic_loss(model, examples, config.l2);
        model_json = calib::logistic_to_json(model);
      } else if (o.model == "naive-bayes") {
        const calib::NaiveBayesModel model =
            calib::train_naive_bayes(examples, o.smoothing, dim);
        for (const auto& ex : examples)
          predictions.push_back(calib::predict_naive_bayes(model, ex));
        final_loss = 0.0;
        model_json = calib::naive_bayes_to_json(model);
      } else {
        throw Error(Errc::invalid_arguments, "--model must be logistic or naive-bayes");
      }

      std::vector<int> labels;
      for (const auto& ex : examples) labels.push_back(ex.label);
      const calib::ScoredDataset scored = calib::make_dataset(predictions, labels);
      const double c_emp = calib::empirical_calibration(scored).c_emp;

      if (!o.emit_model.empty()) calib::write_file_atomic(o.emit_model, model_json + "\n");
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("model").value(o.model);
      w.key("n").value(static_cast<std::uint64_t>(examples.size()));
      w.key("dimensionality").value(static_cast<std::uint64_t>(dim));
      w.key("c_emp").value(c_emp);
      if (o.model == "logistic") w.key("final_loss").value(final_loss);
      if (!true_probs.empty())
        w.key("l1_empirical").value(calib::l1_empirical(predictions, true_probs));
      finish(o.common, w, calib::dataset_to_csv(scored));
    } else if (*c_rescale) {
      const auto& o = o_rescale;
      FlagList flags{{"input", o.input},
                     {"output", o.common.output},
                     {"emit-csv", o.common.emit_csv}};
      const auto [raw, labels] = calib::read_raw_scores_csv(o.input);
      const std::vector<double> scaled = calib::rescale_scores(raw);
      const calib::ScoredDataset scored = calib::make_dataset(scaled, labels);
      JsonWriter w = start_report(command, flags, o.common.seed);
      w.key("n").value(static_cast<std::uint64_t>(raw.size()));
      w.key("raw_min").value(*std::min_element(raw.begin(), raw.end()));
      w.key("raw_max").value(*std::max_element(raw.begin(), raw.end()));
      finish(o.common, w, calib::dataset_to_csv(scored));
    } else if (*c_table1) {
      const auto& o = o_table1;
      FlagList flags{{"output", o.common.output}, {"emit-csv", o.common.emit_csv}};
      calib::LdaConfig config;
      config.seed = o.common.seed;
      const calib::LdaCorpus corpus = calib::generate_corpus(config);
      const auto [freq, trivial_l1] = calib::corpus_baselines(corpus);

      const std::vector<calib::SparseExample> examples = calib::corpus_examples(corpus);
      calib::TrainConfig tc = calib::reference_train_config();
      tc.seed = o.common.seed;
      const calib::LogisticModel model =
          calib::train_logistic(examples, tc, config.vocab_size);

      std::vector<double> predictions, true_probs;
      std::vector<int> labels;
      for (std::size_t i = 0; i < examples.size(); ++i) {
        predictions.push_back(calib::predict_logistic(model, examples[i]));
        true_probs.push_back(corpus.documents[i].true_prob);
        labels.push_back(examples[i].label);
      }
      const double l1 = calib::l1_empirical(predictions, true_probs);
      const double c_emp =
          calib::empirical_calibration(calib::make_dataset(predictions, labels)).c_emp;

      JsonWriter w = start_report(command, flags, o.common.seed);
      auto metric = [&w](const char* name, double value, double reference) {
        w.key(name).begin_object();
        w.key("value").value(value);
        w.key("reference").value(reference);
        w.end_object();
      };
      metric("label_frequency", freq, 0.3448);
      metric("trivial_l1", trivial_l1, 0.2022);
      metric("logistic_l1", l1, 0.127);
      metric("logistic_c_emp", c_emp, 0.0083);
      std::string csv = "metric,value,reference\n";
      csv += "label_frequency," + calib::fmt_double(freq) + ",0.3448\n";
      csv += "trivial_l1," + calib::fmt_double(trivial_l1) + ",0.2022\n";
      csv += "logistic_l1," + calib::fmt_double(l1) + ",0.127\n";
      csv += "logistic_c_emp," + calib::fmt_double(c_emp) + ",0.0083\n";
      finish(o.common, w, csv);
    }
  } catch (const Error& e) {
    JsonWriter w;
    w.begin_object();
    w.key("tool").value("calib");
    w.key("version").value(kVersion);
    w.key("command").value(command);
    w.key("error").begin_object();
    w.key("code").value(calib::errc_name(e.code()));
    w.key("message").value(e.what());
    w.end_object();
    w.end_object();
    std::cout << w.str() << "\n";
    return e.code() == Errc::io_failure ? 2 : 1;
  } catch (const std::exception& e) {
    JsonWriter w;
    w.begin_object();
    w.key("tool").value("calib");
    w.key("version").value(kVersion);
    w.key("command").value(command);
    w.key("error").begin_object();
    w.key("code").value("InternalError");
    w.key("message").value(e.what());
    w.end_object();
    w.end_object();
    std::cout << w.str() << "\n";
    return 1;
  }
  return 0;
}
