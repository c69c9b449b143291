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

#include "fraglab/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "fraglab/threading.hpp"

namespace fraglab::trainer {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

TrainingRun train_with_engine(const qnn::Engine& engine, RealVector theta,
                              const TrainConfig& config) {
  require(config.learning_rate >= 0.0, ErrorCode::bad_argument,
          "learning rate must be >= 0");
  require(config.max_epochs >= 1, ErrorCode::bad_argument,
          "max_epochs must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  TrainingRun run;
  run.p = engine.parameter_count();

  qnn::Evaluation ev = engine.evaluate(theta);
  auto record = [&](double loss_value) {
    require(std::isfinite(loss_value), ErrorCode::non_finite_loss,
            "training produced a non-finite loss at epoch " +
                std::to_string(run.adjusted_losses.size()));
    run.adjusted_losses.push_back(qnn::adjusted_loss(loss_value));
  };
  record(ev.loss);

  auto finish = [&](StopReason reason) {
    run.stop_reason = reason;
    run.final_adjusted = run.adjusted_losses.back();
    run.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return run;
  };

  if (run.adjusted_losses.back() < config.target_loss) {
    return finish(StopReason::target);
  }
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    theta -= config.learning_rate * ev.gradient;
    ev = engine.evaluate(theta);
    record(ev.loss);
    if (run.adjusted_losses.back() < config.target_loss) {
      return finish(StopReason::target);
    }
    if (epoch >= config.plateau_window) {
      const double before =
          run.adjusted_losses[epoch - config.plateau_window];
      const double decay =
          (before - run.adjusted_losses[epoch]) / std::max(before, 1e-12);
      if (decay < config.plateau_threshold) return finish(StopReason::plateau);
    }
  }
  return finish(StopReason::max_epochs);
}

}  // namespace

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::target: return "target";
    case StopReason::plateau: return "plateau";
    case StopReason::max_epochs: return "max_epochs";
    case StopReason::error: return "error";
  }
  return "unknown";
}

TrainingRun train(const qnn::AnsatzSpec& spec, const RealVector& theta0,
                  const model::Dataset& dataset, const TrainConfig& config) {
  require(theta0.size() == spec.p, ErrorCode::dimension_mismatch,
          "theta0 length does not match the parameter count");
  qnn::Engine engine(spec, dataset);
  TrainingRun run = train_with_engine(engine, theta0, config);
  run.seed = config.seed;
  return run;
}

std::vector<TrainingRun> sweep(const model::SystemSpec& system,
                               const model::Dataset& dataset,
                               const SweepConfig& config) {
  require(config.trials_per_p >= 1, ErrorCode::bad_argument,
          "sweep: trials_per_p must be >= 1");
  require(!config.p_values.empty(), ErrorCode::bad_argument,
          "sweep: p_values must be nonempty");
  const double horizon =
      config.horizon > 0.0
          ? config.horizon
          : 10.0 * static_cast<double>(system.qubits + system.ancillas);
  const Matrix generator_a = model::build_a(system);

  struct Job {
    Eigen::Index p;
    int trial;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (Eigen::Index p : config.p_values) {
    for (int k = 0; k < config.trials_per_p; ++k) {
      jobs.push_back(Job{p, k,
                         stable_hash(config.base_seed,
                                     static_cast<std::uint64_t>(p),
                                     static_cast<std::uint64_t>(k))});
    }
  }
  std::vector<TrainingRun> runs(jobs.size());
  parallel_for(jobs.size(), config.threads, [&](std::size_t j) {
    const Job& job = jobs[j];
    TrainingRun& run = runs[j];
    try {
      Rng rng = make_rng(job.seed);
      const Matrix hamiltonian = model::build_hamiltonian(system, rng);
      qnn::AnsatzSpec spec =
          qnn::sample_ansatz(job.p, horizon, hamiltonian, generator_a, rng);
      spec.seed = job.seed;
      std::uniform_real_distribution<double> angle(0.0, kTwoPi);
      RealVector theta0(job.p);
      for (Eigen::Index i = 0; i < job.p; ++i) theta0(i) = angle(rng);
      TrainConfig per_trial = config.train;
      per_trial.seed = job.seed;
      run = train(spec, theta0, dataset, per_trial);
    } catch (const Error& e) {
      run = TrainingRun{};
      run.p = job.p;
      run.stop_reason = StopReason::error;
      run.error = e.what();
    }
    run.seed = job.seed;
  });
  return runs;
}

Histogram minima_histogram(const std::vector<TrainingRun>& runs,
                           double bin_width) {
  require(!runs.empty(), ErrorCode::bad_argument,
          "minima_histogram: no runs given");
  require(bin_width > 0.0 && bin_width <= 1.0, ErrorCode::bad_argument,
          "minima_histogram: bin width must lie in (0, 1]");
  Histogram hist;
  hist.bin_width = bin_width;
  const auto bins =
      static_cast<Eigen::Index>(std::ceil(1.0 / bin_width - 1e-12));
  hist.counts.assign(bins, 0);
  for (const TrainingRun& run : runs) {
    if (run.stop_reason == StopReason::error) continue;
    const double f = std::min(std::max(run.final_adjusted, 0.0), 1.0);
    const auto bin = std::min<Eigen::Index>(
        static_cast<Eigen::Index>(f / bin_width), bins - 1);
    ++hist.counts[bin];
  }
  return hist;
}

std::string curves_csv(const std::vector<TrainingRun>& runs) {
  std::string out = "run_id,p,seed,epoch,adjusted_loss\n";
  for (std::size_t id = 0; id < runs.size(); ++id) {
    const TrainingRun& run = runs[id];
    for (std::size_t epoch = 0; epoch < run.adjusted_losses.size(); ++epoch) {
      out += std::to_string(id);
      out += ',';
      out += std::to_string(run.p);
      out += ',';
      out += std::to_string(run.seed);
      out += ',';
      out += std::to_string(epoch);
      out += ',';
      out += format_double(run.adjusted_losses[epoch]);
      out += '\n';
    }
  }
  return out;
}

std::string finals_csv(const std::vector<TrainingRun>& runs) {
  std::string out = "run_id,p,seed,final_adjusted_loss,stop_reason\n";
  for (std::size_t id = 0; id < runs.size(); ++id) {
    const TrainingRun& run = runs[id];
    out += std::to_string(id);
    out += ',';
    out += std::to_string(run.p);
    out += ',';
    out += std::to_string(run.seed);
    out += ',';
    out += format_double(run.final_adjusted);
    out += ',';
    out += stop_reason_name(run.stop_reason);
    out += '\n';
  }
  return out;
}

std::string histogram_csv(const Histogram& hist) {
  std::string out = "bin_start,bin_end,count\n";
  for (std::size_t b = 0; b < hist.counts.size(); ++b) {
    const double lo = static_cast<double>(b) * hist.bin_width;
    const double hi = std::min(1.0, lo + hist.bin_width);
    out += format_double(lo);
    out += ',';
    out += format_double(hi);
    out += ',';
    out += std::to_string(hist.counts[b]);
    out += '\n';
  }
  return out;
}

std::string summary_json(const std::vector<TrainingRun>& runs) {
  std::vector<Eigen::Index> ps;
  for (const TrainingRun& run : runs) {
    if (std::find(ps.begin(), ps.end(), run.p) == ps.end()) {
      ps.push_back(run.p);
    }
  }
  nlohmann::json per_p = nlohmann::json::array();
  for (Eigen::Index p : ps) {
    double sum = 0.0;
    Eigen::Index n = 0;
    Eigen::Index below = 0;
    Eigen::Index failed = 0;
    for (const TrainingRun& run : runs) {
      if (run.p != p) continue;
      if (run.stop_reason == StopReason::error) {
        ++failed;
        continue;
      }
      sum += run.final_adjusted;
      ++n;
      if (run.final_adjusted < 0.05) ++below;
    }
    per_p.push_back(
        {{"p", p},
         {"runs", n},
         {"failed", failed},
         {"mean_final_adjusted_loss", n > 0 ? sum / double(n) : 0.0},
         {"fraction_below_0.05", n > 0 ? double(below) / double(n) : 0.0}});
  }
  nlohmann::json j = {{"per_p", per_p}, {"total_runs", runs.size()}};
  return j.dump(2);
}

}  // namespace fraglab::trainer
