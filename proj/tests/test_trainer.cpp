// Copyright 2026 The fraglab authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fraglab/trainer.hpp"

using namespace fraglab;

namespace {

struct Fixture {
  model::SystemSpec system = model::make_tl_system(4, 1);
  model::Dataset dataset = model::paper_dataset(4);

  qnn::AnsatzSpec spec(Eigen::Index p, std::uint64_t seed) const {
    Rng rng = make_rng(seed);
    const Matrix hamiltonian = model::build_hamiltonian(system, rng);
    return qnn::sample_ansatz(p, 50.0, hamiltonian, model::build_a(system),
                              rng);
  }
};

}  // namespace

TEST_CASE("zero learning rate plateaus after the window") {
  Fixture f;
  const auto spec = f.spec(3, 1);
  trainer::TrainConfig config;
  config.learning_rate = 0.0;
  const auto run = trainer::train(spec, RealVector::Zero(3), f.dataset, config);
  CHECK(run.stop_reason == trainer::StopReason::plateau);
  REQUIRE(run.adjusted_losses.size() ==
          static_cast<std::size_t>(config.plateau_window) + 1);
  for (double v : run.adjusted_losses) {
    CHECK(v == run.adjusted_losses.front());
  }
}

TEST_CASE("an already optimal start stops at epoch zero") {
  // Zero Hamiltonian, zero angles, label 0: the ancilla projector hits with
  // certainty and the adjusted loss is exactly zero.
  model::Dataset dataset;
  dataset.qubits = 2;
  dataset.ancillas = 1;
  model::DataPoint point;
  point.state = Vector::Zero(8);
  point.state(0) = 1.0;
  point.label = 0;
  dataset.points.push_back(point);
  const auto system = model::make_tl_system(2, 1);
  const auto spec = qnn::make_ansatz({0.0, 0.0}, 0.0, 0.0, 1.0,
                                     Matrix::Zero(8, 8),
                                     model::build_a(system));
  trainer::TrainConfig config;
  const auto run =
      trainer::train(spec, RealVector::Zero(2), dataset, config);
  CHECK(run.stop_reason == trainer::StopReason::target);
  CHECK(run.adjusted_losses.size() == 1);
  CHECK(run.final_adjusted < 0.01);
}

TEST_CASE("training is bit-deterministic for a fixed seed") {
  Fixture f;
  const auto spec = f.spec(4, 7);
  trainer::TrainConfig config;
  config.max_epochs = 20;
  RealVector theta0(4);
  theta0 << 0.3, 5.9, 2.2, 4.4;
  const auto r1 = trainer::train(spec, theta0, f.dataset, config);
  const auto r2 = trainer::train(spec, theta0, f.dataset, config);
  REQUIRE(r1.adjusted_losses.size() == r2.adjusted_losses.size());
  for (std::size_t i = 0; i < r1.adjusted_losses.size(); ++i) {
    CHECK(r1.adjusted_losses[i] == r2.adjusted_losses[i]);
  }
}

TEST_CASE("sweep produces (p, trial)-ordered deterministic runs") {
  Fixture f;
  trainer::SweepConfig config;
  config.p_values = {1, 5};
  config.trials_per_p = 2;
  config.base_seed = 11;
  config.train.max_epochs = 10;

  config.threads = 1;
  const auto serial = trainer::sweep(f.system, f.dataset, config);
  REQUIRE(serial.size() == 4);
  CHECK(serial[0].p == 1);
  CHECK(serial[1].p == 1);
  CHECK(serial[2].p == 5);
  CHECK(serial[3].p == 5);
  CHECK(serial[0].seed != serial[1].seed);

  config.threads = 8;
  const auto parallel = trainer::sweep(f.system, f.dataset, config);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].seed == parallel[i].seed);
    REQUIRE(serial[i].adjusted_losses.size() ==
            parallel[i].adjusted_losses.size());
    for (std::size_t k = 0; k < serial[i].adjusted_losses.size(); ++k) {
      CHECK(serial[i].adjusted_losses[k] == parallel[i].adjusted_losses[k]);
    }
  }
  CHECK(trainer::curves_csv(serial) == trainer::curves_csv(parallel));
  CHECK(trainer::finals_csv(serial) == trainer::finals_csv(parallel));
}

TEST_CASE("every target stop lands below the target") {
  Fixture f;
  trainer::SweepConfig config;
  config.p_values = {10, 20};
  config.trials_per_p = 3;
  config.base_seed = 5;
  const auto runs = trainer::sweep(f.system, f.dataset, config);
  for (const auto& run : runs) {
    if (run.stop_reason == trainer::StopReason::target) {
      CHECK(run.final_adjusted < 0.01);
    }
    CHECK(run.error.empty());
  }
}

TEST_CASE("histogram puts a uniform synthetic spread one per bin") {
  std::vector<trainer::TrainingRun> runs;
  for (int k = 0; k < 10; ++k) {
    trainer::TrainingRun run;
    run.final_adjusted = 0.05 + 0.1 * k;
    runs.push_back(run);
  }
  const auto hist = trainer::minima_histogram(runs, 0.1);
  REQUIRE(hist.counts.size() == 10);
  for (auto c : hist.counts) CHECK(c == 1);
}

TEST_CASE("histogram of identical zeros is a single spike") {
  std::vector<trainer::TrainingRun> runs(5);
  const auto hist = trainer::minima_histogram(runs, 0.05);
  CHECK(hist.counts[0] == 5);
  Eigen::Index total = 0;
  for (auto c : hist.counts) total += c;
  CHECK(total == 5);
}

TEST_CASE("csv documents carry the expected headers and shapes") {
  Fixture f;
  trainer::SweepConfig config;
  config.p_values = {1};
  config.trials_per_p = 1;
  config.base_seed = 3;
  config.train.max_epochs = 1;
  const auto runs = trainer::sweep(f.system, f.dataset, config);
  const std::string curves = trainer::curves_csv(runs);
  CHECK(curves.rfind("run_id,p,seed,epoch,adjusted_loss\n", 0) == 0);
  // Header plus exactly two epochs (0 and 1).
  CHECK(std::count(curves.begin(), curves.end(), '\n') == 3);
  const std::string finals = trainer::finals_csv(runs);
  CHECK(finals.rfind("run_id,p,seed,final_adjusted_loss,stop_reason\n", 0) ==
        0);
  CHECK(std::count(finals.begin(), finals.end(), '\n') == 2);
  CHECK(finals.find("\r") == std::string::npos);
}

TEST_CASE("summary reports per-p statistics") {
  Fixture f;
  trainer::SweepConfig config;
  config.p_values = {1, 5};
  config.trials_per_p = 2;
  config.base_seed = 9;
  config.train.max_epochs = 5;
  const auto runs = trainer::sweep(f.system, f.dataset, config);
  const std::string summary = trainer::summary_json(runs);
  CHECK(summary.find("\"per_p\"") != std::string::npos);
  CHECK(summary.find("fraction_below_0.05") != std::string::npos);
}

TEST_CASE("mean final loss trends downward with more parameters") {
  // Statistical property over 30 trials per parameter count; one adjacent
  // violation below 0.02 is tolerated.
  Fixture f;
  trainer::SweepConfig config;
  config.p_values = {1, 5, 10, 20, 40};
  config.trials_per_p = 30;
  config.base_seed = 2024;
  config.threads = 0;
  const auto runs = trainer::sweep(f.system, f.dataset, config);
  std::vector<double> means;
  for (Eigen::Index p : config.p_values) {
    double sum = 0.0;
    int count = 0;
    for (const auto& run : runs) {
      if (run.p == p) {
        sum += run.final_adjusted;
        ++count;
      }
    }
    means.push_back(sum / count);
  }
  int violations = 0;
  for (std::size_t i = 1; i < means.size(); ++i) {
    if (means[i] > means[i - 1]) {
      ++violations;
      CHECK(means[i] - means[i - 1] < 0.02);
    }
  }
  CHECK(violations <= 1);
}
