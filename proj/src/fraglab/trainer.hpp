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

#pragma once

#include <string>
#include <vector>

#include "fraglab/common.hpp"
#include "fraglab/model.hpp"
#include "fraglab/qnn.hpp"

namespace fraglab::trainer {

struct TrainConfig {
  double learning_rate = 0.1;
  int max_epochs = 200;
  int plateau_window = 5;
  double plateau_threshold = 0.05;  // relative decay over the window
  double target_loss = 0.01;        // on the adjusted scale
  std::uint64_t seed = 0;
};

enum class StopReason { target, plateau, max_epochs, error };

const char* stop_reason_name(StopReason r);

struct TrainingRun {
  Eigen::Index p = 0;
  std::uint64_t seed = 0;
  std::vector<double> adjusted_losses;  // one entry per epoch, epoch 0 first
  double final_adjusted = 0.0;
  StopReason stop_reason = StopReason::max_epochs;
  double wall_seconds = 0.0;  // informational; never written to CSV
  std::string error;          // nonempty only when stop_reason == error
};

/// Plain gradient descent theta <- theta - lr * grad. Stops when the
/// adjusted loss drops below target_loss, when it decayed by less than
/// plateau_threshold (relatively) over the last plateau_window epochs, or
/// at max_epochs. Throws ErrorCode::non_finite_loss if the loss leaves the
/// finite range.
TrainingRun train(const qnn::AnsatzSpec& spec, const RealVector& theta0,
                  const model::Dataset& dataset, const TrainConfig& config);

struct SweepConfig {
  std::vector<Eigen::Index> p_values;
  int trials_per_p = 10;
  std::uint64_t base_seed = 0;
  double horizon = 0.0;  // 0 -> 10 * (L + n_a)
  TrainConfig train;
  int threads = 0;  // 0 -> hardware concurrency
};

/// Independently trains trials_per_p randomly initialized networks for each
/// parameter count. Trial (p, k) derives its seed as
/// stable_hash(base_seed, p, k) and re-samples the Hamiltonian coefficients,
/// the ansatz times and theta0 from it, in that order. Results are ordered
/// by (p, k) and identical for any thread count; per-trial failures are
/// recorded in the run instead of aborting the sweep.
std::vector<TrainingRun> sweep(const model::SystemSpec& system,
                               const model::Dataset& dataset,
                               const SweepConfig& config);

struct Histogram {
  double bin_width = 0.0;
  std::vector<Eigen::Index> counts;  // bins over [0, 1]
};

Histogram minima_histogram(const std::vector<TrainingRun>& runs,
                           double bin_width);

std::string curves_csv(const std::vector<TrainingRun>& runs);
std::string finals_csv(const std::vector<TrainingRun>& runs);
std::string histogram_csv(const Histogram& hist);

/// Per-p means and fractions of finals below 0.05.
std::string summary_json(const std::vector<TrainingRun>& runs);

}  // namespace fraglab::trainer
