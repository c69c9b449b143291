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

#include "fraglab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "fraglab/algebra.hpp"
#include "fraglab/experiments.hpp"
#include "fraglab/model.hpp"

namespace {

thread_local std::string g_last_error;

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

fl_status status_for(const fraglab::Error& e) {
  switch (e.code()) {
    case fraglab::ErrorCode::bad_argument:
    case fraglab::ErrorCode::dimension_mismatch:
      return FL_USAGE_ERROR;
    default:
      return FL_NUMERICAL_ERROR;
  }
}

template <typename Fn>
fl_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const fraglab::Error& e) {
    g_last_error = e.what();
    return status_for(e);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return FL_NUMERICAL_ERROR;
  } catch (...) {
    g_last_error = "unknown error";
    return FL_NUMERICAL_ERROR;
  }
}

fl_status require_arg(bool ok, const char* what) {
  if (!ok) {
    g_last_error = what;
    return FL_USAGE_ERROR;
  }
  return FL_OK;
}

}  // namespace

struct fl_system {
  fraglab::model::SystemSpec spec;
};

struct fl_decomposition {
  fraglab::algebra::KrylovDecomposition decomp;
};

struct fl_dataset {
  fraglab::model::Dataset dataset;
};

extern "C" {

const char* fl_version(void) { return "0.1.0"; }

const char* fl_last_error(void) { return g_last_error.c_str(); }

void fl_string_free(char* s) { std::free(s); }

fl_status fl_system_create_tl(int32_t qubits, int32_t ancillas,
                              fl_system** out) {
  if (fl_status st = require_arg(out != nullptr, "out must not be null"))
    return st;
  *out = nullptr;
  return guarded([&] {
    auto handle = new fl_system{fraglab::model::make_tl_system(qubits,
                                                               ancillas)};
    *out = handle;
    return FL_OK;
  });
}

void fl_system_free(fl_system* system) { delete system; }

int32_t fl_system_qubits(const fl_system* system) {
  return system != nullptr ? static_cast<int32_t>(system->spec.qubits) : 0;
}

int32_t fl_system_ancillas(const fl_system* system) {
  return system != nullptr ? static_cast<int32_t>(system->spec.ancillas) : 0;
}

int64_t fl_system_dim(const fl_system* system) {
  return system != nullptr ? static_cast<int64_t>(system->spec.system_dim())
                           : 0;
}

fl_status fl_system_decompose(const fl_system* system, uint64_t seed,
                              fl_decomposition** out) {
  if (fl_status st = require_arg(system != nullptr && out != nullptr,
                                 "system and out must not be null"))
    return st;
  *out = nullptr;
  return guarded([&] {
    fraglab::Rng rng = fraglab::make_rng(seed);
    auto handle = new fl_decomposition{fraglab::algebra::krylov_decomposition(
        system->spec.generators, fraglab::algebra::kBlockTol, rng)};
    *out = handle;
    return FL_OK;
  });
}

void fl_decomposition_free(fl_decomposition* decomp) { delete decomp; }

int32_t fl_decomposition_sector_count(const fl_decomposition* decomp) {
  return decomp != nullptr
             ? static_cast<int32_t>(decomp->decomp.sectors.size())
             : 0;
}

fl_status fl_decomposition_sector(const fl_decomposition* decomp,
                                  int32_t index, int32_t* id,
                                  int64_t* irrep_dim, int64_t* multiplicity) {
  if (fl_status st = require_arg(decomp != nullptr, "decomp must not be null"))
    return st;
  if (fl_status st = require_arg(
          index >= 0 &&
              index < static_cast<int32_t>(decomp->decomp.sectors.size()),
          "sector index out of range"))
    return st;
  const fraglab::algebra::Sector& s = decomp->decomp.sectors[index];
  if (id != nullptr) *id = s.id;
  if (irrep_dim != nullptr) *irrep_dim = s.irrep_dim;
  if (multiplicity != nullptr) *multiplicity = s.multiplicity;
  return FL_OK;
}

fl_status fl_decomposition_to_json(const fl_decomposition* decomp,
                                   char** json_out) {
  if (fl_status st = require_arg(decomp != nullptr && json_out != nullptr,
                                 "decomp and json_out must not be null"))
    return st;
  return guarded([&] {
    *json_out = copy_string(fraglab::algebra::to_json(decomp->decomp));
    return FL_OK;
  });
}

fl_status fl_decomposition_residual(const fl_decomposition* decomp,
                                    const fl_system* system,
                                    double* residual_out) {
  if (fl_status st =
          require_arg(decomp != nullptr && system != nullptr &&
                          residual_out != nullptr,
                      "decomp, system and residual_out must not be null"))
    return st;
  return guarded([&] {
    double worst = 0.0;
    for (const fraglab::Matrix& g : system->spec.generators) {
      worst = std::max(
          worst, fraglab::algebra::verify_block_structure(g, decomp->decomp));
    }
    *residual_out = worst;
    return FL_OK;
  });
}

fl_status fl_dataset_paper(int32_t qubits, fl_dataset** out) {
  if (fl_status st = require_arg(out != nullptr, "out must not be null"))
    return st;
  *out = nullptr;
  return guarded([&] {
    auto handle = new fl_dataset{fraglab::model::paper_dataset(qubits)};
    *out = handle;
    return FL_OK;
  });
}

void fl_dataset_free(fl_dataset* dataset) { delete dataset; }

int32_t fl_dataset_size(const fl_dataset* dataset) {
  return dataset != nullptr
             ? static_cast<int32_t>(dataset->dataset.points.size())
             : 0;
}

fl_status fl_dataset_to_json(const fl_dataset* dataset, char** json_out) {
  if (fl_status st = require_arg(dataset != nullptr && json_out != nullptr,
                                 "dataset and json_out must not be null"))
    return st;
  return guarded([&] {
    *json_out = copy_string(fraglab::model::to_json(dataset->dataset));
    return FL_OK;
  });
}

fl_status fl_dataset_from_json(const char* json_text, fl_dataset** out) {
  if (fl_status st = require_arg(json_text != nullptr && out != nullptr,
                                 "json_text and out must not be null"))
    return st;
  *out = nullptr;
  return guarded([&] {
    auto handle =
        new fl_dataset{fraglab::model::dataset_from_json(json_text)};
    *out = handle;
    return FL_OK;
  });
}

fl_status fl_dataset_tag_sectors(fl_dataset* dataset,
                                 const fl_decomposition* decomp) {
  if (fl_status st = require_arg(dataset != nullptr && decomp != nullptr,
                                 "dataset and decomp must not be null"))
    return st;
  return guarded([&] {
    fraglab::model::tag_sectors(dataset->dataset, decomp->decomp);
    return FL_OK;
  });
}

fl_status fl_preset_config(const char* name, char** config_json) {
  if (fl_status st = require_arg(name != nullptr && config_json != nullptr,
                                 "name and config_json must not be null"))
    return st;
  return guarded([&] {
    *config_json = copy_string(
        fraglab::experiments::config_to_json(fraglab::experiments::preset(
            name)));
    return FL_OK;
  });
}

fl_status fl_decompose_run(const char* config_json, char** decomposition_json,
                           char** report_json) {
  if (fl_status st = require_arg(config_json != nullptr &&
                                     decomposition_json != nullptr &&
                                     report_json != nullptr,
                                 "arguments must not be null"))
    return st;
  return guarded([&] {
    const auto config = fraglab::experiments::parse_config(config_json);
    const auto result = fraglab::experiments::run_decompose(config);
    *decomposition_json = copy_string(result.decomposition_json);
    *report_json = copy_string(result.report_json);
    return result.pass ? FL_OK : FL_VERIFICATION_FAILED;
  });
}

fl_status fl_train_run(const char* config_json, char** curves_csv,
                       char** finals_csv, char** summary_json) {
  if (fl_status st =
          require_arg(config_json != nullptr && curves_csv != nullptr &&
                          finals_csv != nullptr && summary_json != nullptr,
                      "arguments must not be null"))
    return st;
  return guarded([&] {
    const auto config = fraglab::experiments::parse_config(config_json);
    const auto result = fraglab::experiments::run_train(config);
    *curves_csv = copy_string(result.curves_csv);
    *finals_csv = copy_string(result.finals_csv);
    *summary_json = copy_string(result.summary_json);
    return FL_OK;
  });
}

fl_status fl_minima_run(const char* config_json, char** finals_csv,
                        char** histogram_csv, char** summary_json) {
  if (fl_status st =
          require_arg(config_json != nullptr && finals_csv != nullptr &&
                          histogram_csv != nullptr && summary_json != nullptr,
                      "arguments must not be null"))
    return st;
  return guarded([&] {
    const auto config = fraglab::experiments::parse_config(config_json);
    const auto result = fraglab::experiments::run_minima(config);
    *finals_csv = copy_string(result.finals_csv);
    *histogram_csv = copy_string(result.histogram_csv);
    *summary_json = copy_string(result.summary_json);
    return FL_OK;
  });
}

fl_status fl_verify_run(const char* check, const char* config_json,
                        char** report_json) {
  if (fl_status st = require_arg(check != nullptr && config_json != nullptr &&
                                     report_json != nullptr,
                                 "arguments must not be null"))
    return st;
  return guarded([&] {
    const auto config = fraglab::experiments::parse_config(config_json);
    const auto result = fraglab::experiments::run_verify(check, config);
    *report_json = copy_string(result.report_json);
    return result.pass ? FL_OK : FL_VERIFICATION_FAILED;
  });
}

fl_status fl_dataset_export_run(const char* config_json, char** dataset_json) {
  if (fl_status st = require_arg(config_json != nullptr &&
                                     dataset_json != nullptr,
                                 "arguments must not be null"))
    return st;
  return guarded([&] {
    const auto config = fraglab::experiments::parse_config(config_json);
    *dataset_json =
        copy_string(fraglab::experiments::run_dataset_export(config));
    return FL_OK;
  });
}

}  // extern "C"
