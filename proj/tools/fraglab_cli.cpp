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

// Command-line front end. All computation goes through the C API in
// fraglab.h; this tool only assembles configuration JSON, invokes the
// library and writes the returned documents atomically.

#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "fraglab.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitVerificationFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(fl_status status) {
  switch (status) {
    case FL_OK: return kExitPass;
    case FL_VERIFICATION_FAILED: return kExitVerificationFailed;
    case FL_USAGE_ERROR: return kExitUsage;
    case FL_NUMERICAL_ERROR: return kExitNumerical;
  }
  return kExitNumerical;
}

std::string take_string(char* s) {
  std::string out = s != nullptr ? s : "";
  fl_string_free(s);
  return out;
}

/// Temp file plus rename, so partial documents never appear in out_dir.
void write_atomically(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  const fs::path tmp =
      path.string() + ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<double> scale;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool with_preset) {
  cmd->add_option("--config", opts.config_path, "configuration JSON file");
  if (with_preset) {
    cmd->add_option("--preset", opts.preset,
                    "preset name (fig2-4q, fig2-8q, fig3-4q)");
  }
  cmd->add_option("--out", opts.out_dir, "output directory");
  cmd->add_option("--seed", opts.seed, "base RNG seed");
  cmd->add_option("--threads", opts.threads,
                  "worker threads (0 = logical cores)");
  cmd->add_option("--scale", opts.scale, "trial-count multiplier");
}

json load_config_json(const CommonOptions& opts) {
  if (!opts.preset.empty() && !opts.config_path.empty()) {
    throw CLI::ValidationError("--preset and --config are mutually exclusive");
  }
  json config = json::object();
  if (!opts.preset.empty()) {
    char* text = nullptr;
    const fl_status st = fl_preset_config(opts.preset.c_str(), &text);
    if (st != FL_OK) {
      throw CLI::ValidationError(std::string("preset: ") + fl_last_error());
    }
    config = json::parse(take_string(text));
  } else if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) {
      throw CLI::ValidationError("cannot read config file " +
                                 opts.config_path);
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    config = json::parse(buffer.str(), nullptr, false);
    if (config.is_discarded()) {
      throw CLI::ValidationError("config file is not valid JSON");
    }
  }
  if (opts.seed) config["seed"] = *opts.seed;
  if (opts.threads) config["threads"] = *opts.threads;
  if (opts.scale) config["scale"] = *opts.scale;
  return config;
}

int report_library_error(const char* what, fl_status status) {
  std::cerr << what << ": " << fl_last_error() << "\n";
  return exit_code_for(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fraglab: fragmented-space QNN laboratory"};
  app.require_subcommand(1);
  bool show_version = false;
  app.add_flag("--version", show_version, "print the library version");

  // decompose
  CommonOptions dec_opts;
  std::string dec_model = "tl";
  std::int64_t dec_qubits = 4;
  auto* dec = app.add_subcommand(
      "decompose", "compute the Krylov sector decomposition");
  dec->add_option("--model", dec_model, "system model (tl|temperley-lieb)");
  dec->add_option("--L", dec_qubits, "system qubit count (>= 2)");
  add_common(dec, dec_opts, false);

  // train
  CommonOptions train_opts;
  std::vector<std::int64_t> train_p;
  std::optional<int> train_trials;
  std::optional<int> train_max_epochs;
  std::optional<double> train_lr;
  std::optional<double> train_horizon;
  std::optional<std::int64_t> train_qubits;
  auto* train = app.add_subcommand(
      "train", "gradient-descent training sweep (curves, finals, summary)");
  train->add_option("--p", train_p, "parameter counts to sweep");
  train->add_option("--trials", train_trials, "trials per parameter count");
  train->add_option("--max-epochs", train_max_epochs, "epoch limit");
  train->add_option("--lr", train_lr, "learning rate");
  train->add_option("--T", train_horizon, "ansatz time horizon");
  train->add_option("--L", train_qubits, "system qubit count (4 or 8)");
  add_common(train, train_opts, true);

  // minima
  CommonOptions minima_opts;
  std::vector<std::int64_t> minima_p;
  std::optional<int> minima_trials;
  std::optional<double> minima_bin;
  std::optional<std::int64_t> minima_qubits;
  auto* minima = app.add_subcommand(
      "minima", "distribution of final losses over random initializations");
  minima->add_option("--p", minima_p, "parameter counts to sweep");
  minima->add_option("--trials", minima_trials, "trials per parameter count");
  minima->add_option("--bin-width", minima_bin, "histogram bin width");
  minima->add_option("--L", minima_qubits, "system qubit count (4 or 8)");
  add_common(minima, minima_opts, true);

  // verify
  CommonOptions verify_opts;
  std::string verify_check;
  std::optional<std::int64_t> verify_samples;
  auto* verify = app.add_subcommand(
      "verify", "statistical verification of the landscape predictions");
  verify
      ->add_option("check", verify_check,
                   "variance | moments | generalization | hessian-rank")
      ->required();
  verify->add_option("--samples", verify_samples, "Monte-Carlo sample count");
  add_common(verify, verify_opts, false);

  // dataset
  CommonOptions dataset_opts;
  std::int64_t dataset_qubits = 4;
  auto* dataset = app.add_subcommand("dataset", "dataset utilities");
  auto* dataset_export =
      dataset->add_subcommand("export", "write the reference dataset as JSON");
  dataset_export->add_option("--L", dataset_qubits,
                             "system qubit count (4 or 8)");
  add_common(dataset_export, dataset_opts, false);
  dataset->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (show_version) {
    std::cout << fl_version() << "\n";
    return kExitPass;
  }

  try {
    if (dec->parsed()) {
      json config = load_config_json(dec_opts);
      config["system"] = {{"model", dec_model}, {"L", dec_qubits}};
      char* decomposition = nullptr;
      char* report = nullptr;
      const fl_status st =
          fl_decompose_run(config.dump().c_str(), &decomposition, &report);
      if (st == FL_USAGE_ERROR || st == FL_NUMERICAL_ERROR) {
        return report_library_error("decompose", st);
      }
      const fs::path out(dec_opts.out_dir);
      write_atomically(out / "decomposition.json", take_string(decomposition));
      const std::string report_text = take_string(report);
      write_atomically(out / "decompose_report.json", report_text);
      std::cout << (st == FL_OK ? "PASS" : "FAIL") << " decompose; report in "
                << (out / "decompose_report.json").string() << "\n";
      return exit_code_for(st);
    }

    if (train->parsed()) {
      json config = load_config_json(train_opts);
      if (!train_p.empty()) config["ansatz"]["p_values"] = train_p;
      if (train_horizon) config["ansatz"]["T"] = *train_horizon;
      if (train_trials) config["train"]["trials"] = *train_trials;
      if (train_max_epochs) config["train"]["max_epochs"] = *train_max_epochs;
      if (train_lr) config["train"]["learning_rate"] = *train_lr;
      if (train_qubits) config["system"]["L"] = *train_qubits;
      char* curves = nullptr;
      char* finals = nullptr;
      char* summary = nullptr;
      const fl_status st =
          fl_train_run(config.dump().c_str(), &curves, &finals, &summary);
      if (st != FL_OK) return report_library_error("train", st);
      const fs::path out(train_opts.out_dir);
      write_atomically(out / "curves.csv", take_string(curves));
      write_atomically(out / "finals.csv", take_string(finals));
      write_atomically(out / "summary.json", take_string(summary));
      std::cout << "wrote " << (out / "curves.csv").string() << ", "
                << (out / "finals.csv").string() << ", "
                << (out / "summary.json").string() << "\n";
      return kExitPass;
    }

    if (minima->parsed()) {
      json config = load_config_json(minima_opts);
      if (!minima_p.empty()) config["ansatz"]["p_values"] = minima_p;
      if (minima_trials) config["train"]["trials"] = *minima_trials;
      if (minima_bin) config["histogram_bin_width"] = *minima_bin;
      if (minima_qubits) config["system"]["L"] = *minima_qubits;
      char* finals = nullptr;
      char* histogram = nullptr;
      char* summary = nullptr;
      const fl_status st = fl_minima_run(config.dump().c_str(), &finals,
                                         &histogram, &summary);
      if (st != FL_OK) return report_library_error("minima", st);
      const fs::path out(minima_opts.out_dir);
      write_atomically(out / "finals.csv", take_string(finals));
      write_atomically(out / "histogram.csv", take_string(histogram));
      write_atomically(out / "summary.json", take_string(summary));
      std::cout << "wrote " << (out / "finals.csv").string() << ", "
                << (out / "histogram.csv").string() << ", "
                << (out / "summary.json").string() << "\n";
      return kExitPass;
    }

    if (verify->parsed()) {
      json config = load_config_json(verify_opts);
      if (verify_samples) config["verify"]["samples"] = *verify_samples;
      char* report = nullptr;
      const fl_status st =
          fl_verify_run(verify_check.c_str(), config.dump().c_str(), &report);
      if (st == FL_USAGE_ERROR || st == FL_NUMERICAL_ERROR) {
        return report_library_error("verify", st);
      }
      const fs::path out(verify_opts.out_dir);
      const fs::path path = out / ("verify_" + verify_check + ".json");
      write_atomically(path, take_string(report));
      std::cout << (st == FL_OK ? "PASS" : "FAIL") << " verify "
                << verify_check << "; report in " << path.string() << "\n";
      return exit_code_for(st);
    }

    if (dataset_export->parsed()) {
      json config = load_config_json(dataset_opts);
      config["system"]["L"] = dataset_qubits;
      char* text = nullptr;
      const fl_status st = fl_dataset_export_run(config.dump().c_str(), &text);
      if (st != FL_OK) return report_library_error("dataset export", st);
      const fs::path out(dataset_opts.out_dir);
      write_atomically(out / "dataset.json", take_string(text));
      std::cout << "wrote " << (out / "dataset.json").string() << "\n";
      return kExitPass;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
