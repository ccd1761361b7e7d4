#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "calib/complexity.hpp"
#include "calib/core.hpp"
#include "calib/rng.hpp"
#include "calib/synthlda.hpp"

namespace {

double time_seconds(const std::function<void()>& fn, int reps) {
  fn();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(stop - start).count() / reps;
}

void row(const std::string& name, double serial_s, double parallel_s) {
  std::printf("%-28s %10.4fs %10.4fs %8.2fx\n", name.c_str(), serial_s, parallel_s,
              serial_s / parallel_s);
}

}  // namespace

int main() {
  std::printf("%-28s %11s %11s %9s\n", "kernel", "serial", "parallel", "speedup");

  {
    calib::DiscreteDistribution dist;
    dist.atoms = {{0.1, 0.25, 0.1}, {0.3, 0.25, 0.3}, {0.6, 0.25, 0.6}, {0.9, 0.25, 0.9}};
    const std::size_t n = 2'000'000;
    row("sample_dataset n=2e6",
        time_seconds([&] { calib::sample_dataset_serial(dist, n, 1); }, 3),
        time_seconds([&] { calib::sample_dataset(dist, n, 1); }, 3));
  }

  {
    calib::Rng rng = calib::Rng::substream(7, 0);
    std::vector<double> scores;
    std::vector<int> labels;
    for (int i = 0; i < 4000; ++i) {
      const double s = rng.uniform01();
      scores.push_back(s);
      labels.push_back(rng.bernoulli(s) ? 1 : 0);
    }
    const calib::ScoredDataset data = calib::make_dataset(scores, labels);
    const std::size_t trials = 20000;
    row("rademacher n=4e3 t=2e4",
        time_seconds(
            [&] {
              calib::estimate_interval_rademacher_serial(data, calib::IntervalClass::H,
                                                         trials, 1);
            },
            3),
        time_seconds(
            [&] {
              calib::estimate_interval_rademacher(data, calib::IntervalClass::H, trials, 1);
            },
            3));
  }

  {
    calib::LdaConfig config;
    config.num_docs = 5000;
    row("generate_corpus d=5e3",
        time_seconds([&] { calib::generate_corpus_serial(config); }, 2),
        time_seconds([&] { calib::generate_corpus(config); }, 2));
  }

  return 0;
}
