// Acceptance checklist: one criterion per line, every line must PASS.
// Each criterion also carries a wall-clock budget it must finish inside.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "calib/complexity.hpp"
#include "calib/core.hpp"
#include "calib/decision.hpp"
#include "calib/measure.hpp"
#include "calib/models.hpp"
#include "calib/pav.hpp"
#include "calib/rng.hpp"
#include "calib/synthlda.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

calib::ScoredDataset random_dataset(calib::Rng& rng, std::size_t n) {
  std::vector<double> scores;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = rng.uniform01();
    scores.push_back(s);
    labels.push_back(rng.bernoulli(s) ? 1 : 0);
  }
  return calib::make_dataset(scores, labels);
}

std::vector<double> calibrated_training_scores(const calib::ScoredDataset& ds) {
  const auto link = calib::build_link(calib::fit_pav(ds), ds);
  std::vector<double> scores;
  for (const auto& s : ds.samples) scores.push_back(s.score);
  return calib::apply_link(link, scores);
}

calib::DiscreteDistribution random_calibrated_distribution(calib::Rng& rng) {
  calib::DiscreteDistribution d;
  const std::size_t atoms = 2 + rng.next_u64() % 7;
  std::vector<double> f;
  for (std::size_t i = 0; i < atoms; ++i) f.push_back(rng.uniform01());
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  std::vector<double> mass;
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    mass.push_back(0.05 + rng.uniform01());
    total += mass.back();
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double m = i + 1 == f.size() ? 1.0 - acc : mass[i] / total;
    acc += m;
    d.atoms.push_back({f[i], m, f[i]});
  }
  return d;
}

// ---- criteria ----------------------------------------------------------

bool measure_oracle_equivalence(std::string& detail) {
  calib::Rng rng = calib::Rng::substream(101, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 200;
    const auto ds = random_dataset(rng, n);
    const double fast = calib::empirical_calibration(ds).c_emp;
    const double brute = calib::empirical_calibration_bruteforce(ds).c_emp;
    if (std::abs(fast - brute) > 1e-12) {
      std::ostringstream os;
      os << "trial " << trial << ": fast " << fast << " vs brute " << brute;
      detail = os.str();
      return false;
    }
  }
  detail = "1000 datasets, n in [1,200]";
  return true;
}

std::vector<calib::ScoredDataset> shared_pav_datasets() {
  std::vector<calib::ScoredDataset> out;
  calib::Rng rng = calib::Rng::substream(102, 0);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 500;
    out.push_back(random_dataset(rng, n));
  }
  return out;
}

bool pav_calibrates_to_zero(std::string& detail) {
  const auto datasets = shared_pav_datasets();
  double worst = 0.0;
  for (const auto& ds : datasets) {
    std::vector<int> labels;
    for (const auto& s : ds.samples) labels.push_back(s.label);
    const auto rep = calib::empirical_calibration(
        calib::make_dataset(calibrated_training_scores(ds), labels));
    worst = std::max(worst, rep.c_emp);
    if (rep.c_emp > 1e-9) {
      std::ostringstream os;
      os << "c_emp after calibration " << rep.c_emp;
      detail = os.str();
      return false;
    }
  }
  std::ostringstream os;
  os << "500 datasets, worst residual " << worst;
  detail = os.str();
  return true;
}

bool pav_loss_dominance(std::string& detail) {
  const auto datasets = shared_pav_datasets();
  for (std::size_t di = 0; di < datasets.size(); ++di) {
    const auto& ds = datasets[di];
    std::vector<int> labels;
    for (const auto& s : ds.samples) labels.push_back(s.label);
    const auto calibrated = calib::make_dataset(calibrated_training_scores(ds), labels);
    for (int k = 1; k <= 99; ++k) {
      const double p = static_cast<double>(k) / 100.0;
      const calib::CostPair costs{p, 1.0 - p};
      const auto before = calib::empirical_loss(ds, p, costs);
      const auto after = calib::empirical_loss(calibrated, p, costs);
      // Scaled by 100 the comparison is exact in integers.
      const long long lhs = static_cast<long long>(k) * static_cast<long long>(after.fp) +
                            static_cast<long long>(100 - k) * static_cast<long long>(after.fn);
      const long long rhs = static_cast<long long>(k) * static_cast<long long>(before.fp) +
                            static_cast<long long>(100 - k) * static_cast<long long>(before.fn);
      if (lhs > rhs) {
        std::ostringstream os;
        os << "dataset " << di << " p " << p << ": calibrated " << lhs << " > raw " << rhs;
        detail = os.str();
        return false;
      }
    }
  }
  detail = "500 datasets x 99 thresholds, integer-exact";
  return true;
}

bool pav_minimax_optimality(std::string& detail) {
  calib::Rng rng = calib::Rng::substream(104, 0);

  // Part 1: exhaustive monotone grid {0, 1/8, ..., 1}^n for n <= 6.
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto ds = random_dataset(rng, n);
      const auto fit = calib::fit_pav(ds);
      auto sorted = ds.samples;
      std::stable_sort(sorted.begin(), sorted.end(),
                       [](const auto& a, const auto& b) { return a.score < b.score; });
      std::vector<int> labels;
      for (const auto& s : sorted) labels.push_back(s.label);
      const double pav_obj = calib::calibration_objective(fit.z, labels);

      std::vector<double> cand(n);
      bool ok = true;
      const std::function<void(std::size_t, int)> enumerate = [&](std::size_t pos,
                                                                  int lowest) {
        if (!ok) return;
        if (pos == n) {
          if (calib::calibration_objective(cand, labels) < pav_obj - 1e-9) ok = false;
          return;
        }
        for (int level = lowest; level <= 8; ++level) {
          cand[pos] = static_cast<double>(level) / 8.0;
          enumerate(pos + 1, level);
        }
      };
      enumerate(0, 0);
      if (!ok) {
        std::ostringstream os;
        os << "grid candidate beats pav objective " << pav_obj << " at n " << n;
        detail = os.str();
        return false;
      }
    }
  }

  // Part 2: random monotone candidates for larger n.
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 2 + rng.next_u64() % 49;
    const auto ds = random_dataset(rng, n);
    const auto fit = calib::fit_pav(ds);
    auto sorted = ds.samples;
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const auto& a, const auto& b) { return a.score < b.score; });
    std::vector<int> labels;
    for (const auto& s : sorted) labels.push_back(s.label);
    const double pav_obj = calib::calibration_objective(fit.z, labels);
    std::vector<double> cand(n);
    for (int c = 0; c < 10000; ++c) {
      for (std::size_t i = 0; i < n; ++i) cand[i] = rng.uniform01();
      std::sort(cand.begin(), cand.end());
      if (calib::calibration_objective(cand, labels) < pav_obj - 1e-9) {
        std::ostringstream os;
        os << "random candidate beats pav at n " << n;
        detail = os.str();
        return false;
      }
    }
  }
  detail = "exhaustive grid n<=6 plus 100x10000 random candidates n<=50";
  return true;
}

bool rademacher_ordering(std::string& detail) {
  calib::Rng rng = calib::Rng::substream(105, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 12;
    const auto ds = random_dataset(rng, n);
    const auto h =
        calib::estimate_interval_rademacher(ds, calib::IntervalClass::H, 4096, 1);
    const auto h1 =
        calib::estimate_interval_rademacher(ds, calib::IntervalClass::H1, 4096, 1);
    const auto h2 =
        calib::estimate_interval_rademacher(ds, calib::IntervalClass::H2, 4096, 1);
    if (!(h.exact && h1.exact && h2.exact)) {
      detail = "expected exact enumeration";
      return false;
    }
    if (h1.mean > h.mean + 1e-12 || h2.mean > h.mean + 1e-12) {
      std::ostringstream os;
      os << "H " << h.mean << " H1 " << h1.mean << " H2 " << h2.mean << " at n " << n;
      detail = os.str();
      return false;
    }
  }
  detail = "50 exact enumerations, n <= 12";
  return true;
}

bool svm_witness_value(std::string& detail) {
  calib::Rng rng = calib::Rng::substream(106, 0);
  const std::size_t n = 8, d = 9;
  std::vector<std::vector<double>> X(n, std::vector<double>(d));
  for (auto& row : X)
    for (auto& v : row) v = 2.0 * rng.uniform01() - 1.0;

  double mean = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> sigma;
    for (std::size_t i = 0; i < n; ++i) sigma.push_back((mask >> i) & 1 ? 1 : -1);
    const auto witness = calib::svm_witness(X, sigma, 50.0);
    mean += witness.achieved / static_cast<double>(n);
  }
  mean /= static_cast<double>(std::uint64_t{1} << n);
  std::ostringstream os;
  os << "mean achieved fraction " << mean;
  detail = os.str();
  return mean >= 0.5 - 1e-6 && mean <= 0.5;
}

bool theorem2_coverage(std::string& detail) {
  calib::DiscreteDistribution dist;
  dist.atoms = {{0.1, 0.2, 0.15},
                {0.3, 0.2, 0.25},
                {0.5, 0.2, 0.55},
                {0.7, 0.2, 0.65},
                {0.9, 0.2, 0.95}};
  calib::validate_distribution(dist);
  const double c_true = calib::true_calibration(dist).c;
  const std::size_t n = 5000;
  const double delta = 0.05;
  int violations = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto ds = calib::sample_dataset(dist, n, 9000 + trial);
    const double c_emp = calib::empirical_calibration(ds).c_emp;
    const auto r =
        calib::estimate_interval_rademacher(ds, calib::IntervalClass::H, 512, 700 + trial);
    const double eps = calib::theorem2_epsilon(r.mean, n, delta);
    if (std::abs(c_emp - c_true) > eps) ++violations;
  }
  const double rate = violations / 400.0;
  std::ostringstream os;
  os << "violation rate " << rate << " (c " << c_true << ")";
  detail = os.str();
  return rate <= 0.05;
}

bool bayes_threshold_optimality(std::string& detail) {
  calib::Rng rng = calib::Rng::substream(108, 0);
  for (int dtrial = 0; dtrial < 200; ++dtrial) {
    const auto dist = random_calibrated_distribution(rng);
    for (int ctrial = 0; ctrial < 20; ++ctrial) {
      const calib::CostPair costs{0.05 + rng.uniform01(), 0.05 + rng.uniform01()};
      const double star =
          calib::expected_loss_on_distribution(dist, calib::bayes_threshold(costs), costs);
      std::vector<double> thresholds{0.0, 1.0};
      for (const auto& atom : dist.atoms) thresholds.push_back(atom.f_value);
      for (double t : thresholds) {
        if (star > calib::expected_loss_on_distribution(dist, t, costs) + 1e-12) {
          std::ostringstream os;
          os << "threshold " << t << " beats bayes on distribution " << dtrial;
          detail = os.str();
          return false;
        }
      }
    }
  }
  detail = "200 calibrated distributions x 20 cost pairs";
  return true;
}

bool table1_reproduction(std::string& detail) {
  calib::LdaConfig config;  // defaults: 20000 docs, 20 topics, 1000 words
  const auto corpus = calib::generate_corpus(config);
  const auto [freq, trivial_l1] = calib::corpus_baselines(corpus);

  const auto examples = calib::corpus_examples(corpus);
  const auto model = calib::train_logistic(examples, calib::reference_train_config(),
                                           config.vocab_size);
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

  std::ostringstream os;
  os << "freq " << freq << " trivial_l1 " << trivial_l1 << " l1 " << l1 << " c_emp "
     << c_emp;
  detail = os.str();
  return std::abs(freq - 0.3448) <= 0.01 && std::abs(trivial_l1 - 0.2022) <= 0.01 &&
         l1 >= 0.10 && l1 <= 0.16 && c_emp <= 0.02;
}

bool convergence_trend(std::string& detail) {
  calib::DiscreteDistribution dist;
  dist.atoms = {{0.1, 0.2, 0.05},
                {0.3, 0.2, 0.2},
                {0.5, 0.2, 0.5},
                {0.7, 0.2, 0.8},
                {0.9, 0.2, 0.95}};
  calib::validate_distribution(dist);
  std::vector<double> grid;
  for (const auto& a : dist.atoms) grid.push_back(a.f_value);

  std::vector<double> medians;
  for (const std::size_t n : {std::size_t{200}, std::size_t{2000}, std::size_t{20000}}) {
    std::vector<double> sups;
    for (int trial = 0; trial < 50; ++trial) {
      const auto ds = calib::sample_dataset(dist, n, 5000 + trial);
      const auto link = calib::build_link(calib::fit_pav(ds), ds);
      const auto diag = calib::convergence_diagnostics(dist, link, grid);
      double sup = 0.0;
      for (std::size_t i = 0; i < grid.size(); ++i)
        sup = std::max(sup, std::abs(diag.G_e[i] - diag.G[i]));
      sups.push_back(sup);
    }
    std::sort(sups.begin(), sups.end());
    medians.push_back(0.5 * (sups[24] + sups[25]));
  }
  std::ostringstream os;
  os << "medians " << medians[0] << " > " << medians[1] << " > " << medians[2];
  detail = os.str();
  return medians[0] > medians[1] && medians[1] > medians[2];
}

bool loss_ratio_sanity(std::string& detail) {
  calib::LdaConfig config;
  const auto corpus = calib::generate_corpus(config);
  const auto examples = calib::corpus_examples(corpus);

  const std::size_t n_train = 16000, n_val = 2000;
  const std::vector<calib::SparseExample> train(examples.begin(),
                                                examples.begin() + n_train);
  const auto model =
      calib::train_logistic(train, calib::reference_train_config(), config.vocab_size);

  std::vector<double> val_scores, test_scores;
  std::vector<int> val_labels, test_labels;
  for (std::size_t i = n_train; i < examples.size(); ++i) {
    const double p = calib::predict_logistic(model, examples[i]);
    if (i < n_train + n_val) {
      val_scores.push_back(p);
      val_labels.push_back(examples[i].label);
    } else {
      test_scores.push_back(p);
      test_labels.push_back(examples[i].label);
    }
  }
  const auto val = calib::make_dataset(val_scores, val_labels);
  const auto test = calib::make_dataset(test_scores, test_labels);

  std::vector<double> grid;
  for (int k = 1; k <= 9; ++k) grid.push_back(static_cast<double>(k) / 10.0);

  double worst_shift = 0.0;
  for (const auto& [p, ratio] : calib::loss_ratio_experiment(val, test, grid)) {
    (void)p;
    worst_shift = std::max(worst_shift, std::abs(ratio - 1.0));
  }

  // Deliberately distorted scores: squaring pushes everything down.
  auto square_all = [](std::vector<double> v) {
    for (double& x : v) x *= x;
    return v;
  };
  const auto val_sq = calib::make_dataset(square_all(val_scores), val_labels);
  const auto test_sq = calib::make_dataset(square_all(test_scores), test_labels);
  int improved = 0;
  for (const auto& [p, ratio] : calib::loss_ratio_experiment(val_sq, test_sq, grid)) {
    (void)p;
    if (ratio < 1.0) ++improved;
  }

  std::ostringstream os;
  os << "worst logistic shift " << worst_shift << ", distorted improved " << improved
     << "/9";
  detail = os.str();
  return worst_shift <= 0.03 && improved >= 5;
}

struct Criterion {
  const char* name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"measure-oracle-equivalence", 10.0, measure_oracle_equivalence},
      {"pav-calibrates-to-zero", 10.0, pav_calibrates_to_zero},
      {"pav-loss-dominance", 30.0, pav_loss_dominance},
      {"pav-minimax-optimality", 60.0, pav_minimax_optimality},
      {"rademacher-class-ordering", 60.0, rademacher_ordering},
      {"sign-witness-value", 5.0, svm_witness_value},
      {"uniform-bound-coverage", 120.0, theorem2_coverage},
      {"bayes-threshold-optimality", 5.0, bayes_threshold_optimality},
      {"reference-table-reproduction", 300.0, table1_reproduction},
      {"link-convergence-trend", 120.0, convergence_trend},
      {"loss-ratio-sanity", 120.0, loss_ratio_sanity},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = clock_type::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criterion.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    const double elapsed = std::chrono::duration<double>(clock_type::now() - start).count();
    const bool in_budget = elapsed < criterion.budget_seconds;
    if (ok && in_budget) {
      std::printf("[PASS] %-30s %6.2fs (budget %.0fs) %s\n", criterion.name, elapsed,
                  criterion.budget_seconds, detail.c_str());
    } else {
      ++failures;
      std::printf("[FAIL] %-30s %6.2fs (budget %.0fs) %s%s\n", criterion.name, elapsed,
                  criterion.budget_seconds, detail.c_str(),
                  in_budget ? "" : " [over budget]");
    }
  }
  if (failures == 0) {
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
