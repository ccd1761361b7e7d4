#include <doctest.h>

#include <cmath>
#include <vector>

#include "calib/decision.hpp"
#include "calib/errors.hpp"
#include "calib/measure.hpp"
#include "calib/pav.hpp"
#include "calib/rng.hpp"
#include "oracles.hpp"

TEST_SUITE("decision") {
  TEST_CASE("bayes threshold and cost validation") {
    CHECK(calib::bayes_threshold({1.0, 1.0}) == doctest::Approx(0.5));
    CHECK(calib::bayes_threshold({2.0, 1.0}) == doctest::Approx(2.0 / 3.0));
    CHECK(calib::bayes_threshold({0.25, 0.75}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(calib::bayes_threshold({0.0, 1.0}), calib::Error);
    CHECK_THROWS_AS(calib::bayes_threshold({1.0, -2.0}), calib::Error);
    CHECK_THROWS_AS(calib::bayes_threshold({std::nan(""), 1.0}), calib::Error);
  }

  TEST_CASE("empirical loss counts false positives and negatives") {
    const auto ds = calib::make_dataset(std::vector<double>{0.1, 0.4, 0.6, 0.9},
                                        std::vector<int>{1, 0, 1, 0});
    const calib::CostPair costs{2.0, 3.0};
    const auto s = calib::empirical_loss(ds, 0.5, costs);
    CHECK(s.fp == 1);  // 0.9 predicted positive, label 0
    CHECK(s.fn == 1);  // 0.1 predicted negative, label 1
    CHECK(s.total_loss == doctest::Approx(5.0));
    CHECK(s.mean_loss == doctest::Approx(1.25));

    // The rule is ">= threshold": a score exactly at the threshold fires.
    const auto at = calib::empirical_loss(ds, 0.4, costs);
    CHECK(at.fp == 2);
    CHECK(at.fn == 1);
  }

  TEST_CASE("empirical loss matches the oracle on random data") {
    calib::Rng rng = calib::Rng::substream(41, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto ds = oracles::random_dataset(rng, 1 + rng.next_u64() % 50);
      const double t = rng.uniform01();
      const calib::CostPair costs{0.1 + rng.uniform01(), 0.1 + rng.uniform01()};
      const auto got = calib::empirical_loss(ds, t, costs);
      const auto want = oracles::empirical_loss(ds, t, costs);
      CHECK(got.fp == want.fp);
      CHECK(got.fn == want.fn);
      CHECK(got.total_loss == doctest::Approx(want.total_loss).epsilon(1e-12));
    }
  }

  TEST_CASE("empirical loss rejects bad thresholds") {
    const auto ds = calib::make_dataset(std::vector<double>{0.5}, std::vector<int>{1});
    CHECK_THROWS_AS(calib::empirical_loss(ds, -0.1, {1, 1}), calib::Error);
    CHECK_THROWS_AS(calib::empirical_loss(ds, 1.1, {1, 1}), calib::Error);
  }

  TEST_CASE("expected loss on a distribution") {
    calib::DiscreteDistribution d;
    d.atoms = {{0.2, 0.5, 0.3}, {0.8, 0.5, 0.7}};
    const calib::CostPair costs{1.0, 1.0};
    // threshold 0.5: atom 0.2 predicted 0 (misses rate 0.3), atom 0.8
    // predicted 1 (false alarms 1-0.7).
    CHECK(calib::expected_loss_on_distribution(d, 0.5, costs) ==
          doctest::Approx(0.5 * 0.3 + 0.5 * 0.3));
    // threshold 0: everything predicted 1.
    CHECK(calib::expected_loss_on_distribution(d, 0.0, costs) ==
          doctest::Approx(0.5 * 0.7 + 0.5 * 0.3));
  }

  TEST_CASE("bayes threshold optimal on calibrated distributions") {
    calib::Rng rng = calib::Rng::substream(42, 0);
    for (int trial = 0; trial < 50; ++trial) {
      calib::DiscreteDistribution d;
      const std::size_t atoms = 2 + rng.next_u64() % 6;
      std::vector<double> f;
      for (std::size_t i = 0; i < atoms; ++i) f.push_back(rng.uniform01());
      std::sort(f.begin(), f.end());
      f.erase(std::unique(f.begin(), f.end()), f.end());
      double remaining = 1.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double mass = i + 1 == f.size() ? remaining : remaining / 2.0;
        if (i + 1 != f.size()) remaining -= mass;
        d.atoms.push_back({f[i], mass, f[i]});  // calibrated: rate == f
      }
      const calib::CostPair costs{0.05 + rng.uniform01(), 0.05 + rng.uniform01()};
      const double star = calib::expected_loss_on_distribution(
          d, calib::bayes_threshold(costs), costs);
      for (const auto& atom : d.atoms) {
        CHECK(star <= calib::expected_loss_on_distribution(d, atom.f_value, costs) + 1e-12);
      }
      CHECK(star <= calib::expected_loss_on_distribution(d, 0.0, costs) + 1e-12);
      CHECK(star <= calib::expected_loss_on_distribution(d, 1.0, costs) + 1e-12);
    }
  }

  TEST_CASE("loss ratio experiment on identical splits is at most one") {
    calib::Rng rng = calib::Rng::substream(43, 0);
    const auto ds = oracles::random_dataset(rng, 400);
    const std::vector<double> grid{0.1, 0.3, 0.5, 0.7, 0.9};
    const auto points = calib::loss_ratio_experiment(ds, ds, grid);
    REQUIRE(points.size() == grid.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      CHECK(points[i].first == grid[i]);
      CHECK(points[i].second <= 1.0 + 1e-12);  // in-sample recalibration cannot hurt
    }
  }

  TEST_CASE("loss ratio of an already-zero pre loss") {
    // All labels match hard scores: pre-loss is zero at p = 0.5.
    const auto val = calib::make_dataset(std::vector<double>{0.0, 1.0},
                                         std::vector<int>{0, 1});
    const auto test = calib::make_dataset(std::vector<double>{0.0, 1.0},
                                          std::vector<int>{0, 1});
    const auto points = calib::loss_ratio_experiment(val, test, std::vector<double>{0.5});
    CHECK(points[0].second == doctest::Approx(1.0));
  }

  TEST_CASE("loss ratio handles degenerate grids") {
    const auto ds = calib::make_dataset(std::vector<double>{0.2, 0.8},
                                        std::vector<int>{0, 1});
    CHECK(calib::loss_ratio_experiment(ds, ds, std::vector<double>{}).empty());
    CHECK_THROWS_AS(calib::loss_ratio_experiment(ds, ds, std::vector<double>{1.5}),
                    calib::Error);
  }
}
