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
#include "fraglab/trainer.hpp"

namespace fraglab::experiments {

/// Parsed experiment configuration. Every field is validated on parse and
/// unknown JSON keys are rejected before any computation starts.
struct ExperimentConfig {
  std::uint64_t seed = 1;
  int threads = 0;   // 0 -> hardware concurrency
  double scale = 1.0;

  std::string model_name = "temperley-lieb";
  Eigen::Index qubits = 4;
  Eigen::Index ancilla_override = 0;  // 0 -> take n_a from the dataset

  std::vector<Eigen::Index> p_values;
  double horizon = 0.0;  // 0 -> 10 * (L + n_a)

  trainer::TrainConfig train;
  int trials = 10;

  Eigen::Index verify_samples = 100000;
  double tolerance_sigmas = 4.0;
  std::vector<double> verify_horizons = {10.0, 40.0, 160.0};

  double histogram_bin_width = 0.05;
};

ExperimentConfig parse_config(const std::string& json_text);

/// Serializes a config so that parse_config round-trips it. The emitted
/// scale is 1.0; trial counts are already resolved.
std::string config_to_json(const ExperimentConfig& config);

/// Built-in presets: fig2-4q, fig2-8q, fig3-4q.
ExperimentConfig preset(const std::string& name);

/// Multiplies the trial count, rounding and clamping to at least one trial.
void apply_scale(ExperimentConfig& config, double scale);

struct DecomposeResult {
  std::string decomposition_json;
  std::string report_json;
  bool pass = false;
};
DecomposeResult run_decompose(const ExperimentConfig& config);

struct TrainResult {
  std::string curves_csv;
  std::string finals_csv;
  std::string summary_json;
};
TrainResult run_train(const ExperimentConfig& config);

struct MinimaResult {
  std::string finals_csv;
  std::string histogram_csv;
  std::string summary_json;
};
MinimaResult run_minima(const ExperimentConfig& config);

struct VerifyResult {
  std::string report_json;
  bool pass = false;
};
/// check is one of: variance, moments, generalization, hessian-rank.
VerifyResult run_verify(const std::string& check,
                        const ExperimentConfig& config);

std::string run_dataset_export(const ExperimentConfig& config);

}  // namespace fraglab::experiments
