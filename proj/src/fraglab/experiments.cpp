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

#include "fraglab/experiments.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "fraglab/algebra.hpp"
#include "fraglab/model.hpp"
#include "fraglab/qnn.hpp"
#include "fraglab/theory.hpp"

namespace fraglab::experiments {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 6.283185307179586476925286766559;

void reject_unknown_keys(const json& j, const std::vector<std::string>& known,
                         const std::string& where) {
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      fail(ErrorCode::bad_argument,
           "config: unknown key '" + item.key() + "' in " + where);
    }
  }
}

std::vector<Eigen::Index> parse_p_values(const json& j) {
  std::vector<Eigen::Index> out;
  for (const auto& v : j) {
    const auto p = v.get<Eigen::Index>();
    require(p >= 0, ErrorCode::bad_argument, "config: p must be >= 0");
    out.push_back(p);
  }
  return out;
}

model::Dataset dataset_for(const ExperimentConfig& config) {
  model::Dataset dataset = model::paper_dataset(config.qubits);
  if (config.ancilla_override > 0) {
    require(config.ancilla_override >= dataset.ancillas,
            ErrorCode::bad_argument,
            "config: n_a override below the label width of the dataset");
    if (config.ancilla_override > dataset.ancillas) {
      const Eigen::Index sys_dim = Eigen::Index(1) << dataset.qubits;
      const Eigen::Index old_anc = Eigen::Index(1) << dataset.ancillas;
      const Eigen::Index new_anc = Eigen::Index(1) << config.ancilla_override;
      for (model::DataPoint& p : dataset.points) {
        Vector widened = Vector::Zero(sys_dim * new_anc);
        for (Eigen::Index i = 0; i < sys_dim; ++i) {
          widened(i * new_anc) = p.state(i * old_anc);
        }
        p.state = std::move(widened);
      }
      dataset.ancillas = config.ancilla_override;
    }
  }
  return dataset;
}

model::SystemSpec system_for(const ExperimentConfig& config,
                             Eigen::Index ancillas) {
  require(config.model_name == "temperley-lieb" || config.model_name == "tl",
          ErrorCode::bad_argument,
          "config: unknown model '" + config.model_name + "'");
  return model::make_tl_system(config.qubits, ancillas);
}

trainer::SweepConfig sweep_config_for(const ExperimentConfig& config) {
  require(!config.p_values.empty(), ErrorCode::bad_argument,
          "config: p_values must be nonempty");
  trainer::SweepConfig sweep;
  sweep.p_values = config.p_values;
  sweep.trials_per_p = config.trials;
  sweep.base_seed = config.seed;
  sweep.horizon = config.horizon;
  sweep.train = config.train;
  sweep.threads = config.threads;
  return sweep;
}

struct Check {
  std::string name;
  double formula = 0.0;
  double estimate = 0.0;
  double stderr_value = 0.0;
  Eigen::Index samples = 0;
  bool pass = false;
};

json check_to_json(const Check& c) {
  return json{{"name", c.name},
              {"formula_value", c.formula},
              {"mc_estimate", c.estimate},
              {"stderr", c.stderr_value},
              {"samples", c.samples},
              {"pass", c.pass}};
}

struct MomentStats {
  double mean = 0.0;
  double stderr_value = 0.0;
};

MomentStats column_mean(const theory::GradientStatSamples& samples,
                        std::size_t col, bool squared) {
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& row : samples.samples) {
    const double v = squared ? row[col] * row[col] : row[col];
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples.samples.size());
  MomentStats out;
  out.mean = sum / n;
  out.stderr_value =
      std::sqrt(std::max(0.0, sum_sq / n - out.mean * out.mean) / n);
  return out;
}

MomentStats column_product_mean(const theory::GradientStatSamples& samples,
                                std::size_t a, std::size_t b) {
  double sum = 0.0, sum_sq = 0.0;
  for (const auto& row : samples.samples) {
    const double v = row[a] * row[b];
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(samples.samples.size());
  MomentStats out;
  out.mean = sum / n;
  out.stderr_value =
      std::sqrt(std::max(0.0, sum_sq / n - out.mean * out.mean) / n);
  return out;
}

VerifyResult verify_variance(const ExperimentConfig& config) {
  struct Shape {
    const char* name;
    Eigen::Index irrep_dim, ancilla_dim, a_rank, points;
    double a_value;
  };
  // Five flat-spectrum shapes (integral r_A, so the semi-isotropic
  // replacement is exact) covering N_a in {2, 4} and M_lambda in {1, 2}.
  const std::vector<Shape> shapes = {
      {"n2_na2_m1", 2, 2, 2, 1, 2.0}, {"n2_na2_m2", 2, 2, 2, 2, 2.0},
      {"n1_na4_m1", 1, 4, 2, 1, 3.0}, {"n3_na4_m2", 3, 4, 6, 2, 2.0},
      {"n1_na2_m1", 1, 2, 2, 1, 2.0},
  };
  json checks = json::array();
  bool all_pass = true;
  const Eigen::Index n_samples = config.verify_samples;
  std::uint64_t stream = 0;
  for (const Shape& s : shapes) {
    theory::GaussianModelSpec model;
    model.sectors.push_back(theory::make_flat_sector(
        s.irrep_dim, s.ancilla_dim, s.a_value, s.a_rank, s.points));
    const auto samples = theory::sample_gradient_stat(
        model, 2, n_samples, stable_hash(config.seed, 2001, stream++),
        config.threads);
    const double formula =
        theory::component_second_moment(model.sectors[0],
                                        model.total_points());
    // Second moment of every sampled component against the closed form.
    for (std::size_t col = 0; col < samples.keys.size(); ++col) {
      const MomentStats st = column_mean(samples, col, true);
      Check c;
      c.name = std::string("second_moment/") + s.name + "/x" +
               std::to_string(samples.keys[col].x) + "_i" +
               std::to_string(samples.keys[col].i);
      c.formula = formula;
      c.estimate = st.mean;
      c.stderr_value = st.stderr_value;
      c.samples = n_samples;
      c.pass = std::abs(st.mean - formula) <=
               config.tolerance_sigmas * st.stderr_value;
      all_pass = all_pass && c.pass;
      checks.push_back(check_to_json(c));
    }
    // First moment vanishes by sign symmetry.
    {
      const MomentStats st = column_mean(samples, 0, false);
      Check c;
      c.name = std::string("first_moment/") + s.name;
      c.formula = 0.0;
      c.estimate = st.mean;
      c.stderr_value = st.stderr_value;
      c.samples = n_samples;
      c.pass = std::abs(st.mean) <= config.tolerance_sigmas * st.stderr_value;
      all_pass = all_pass && c.pass;
      checks.push_back(check_to_json(c));
    }
    // Cross-component covariance (same x, different i).
    {
      const MomentStats st = column_product_mean(samples, 0, 1);
      Check c;
      c.name = std::string("cross_component/") + s.name;
      c.formula = 0.0;
      c.estimate = st.mean;
      c.stderr_value = st.stderr_value;
      c.samples = n_samples;
      c.pass = std::abs(st.mean) <= config.tolerance_sigmas * st.stderr_value;
      all_pass = all_pass && c.pass;
      checks.push_back(check_to_json(c));
    }
    // Cross-datapoint covariance (same i, different x) where available.
    if (s.points >= 2) {
      // Columns are (x, i) pairs, i-minor: (x0,i0) is 0, (x1,i0) is 2.
      const MomentStats st = column_product_mean(samples, 0, 2);
      Check c;
      c.name = std::string("cross_datapoint/") + s.name;
      c.formula = 0.0;
      c.estimate = st.mean;
      c.stderr_value = st.stderr_value;
      c.samples = n_samples;
      c.pass = std::abs(st.mean) <= config.tolerance_sigmas * st.stderr_value;
      all_pass = all_pass && c.pass;
      checks.push_back(check_to_json(c));
    }
  }
  // Two-sector model: total E||grad||^2 against variance_formula.
  {
    theory::GaussianModelSpec model;
    model.sectors.push_back(theory::make_flat_sector(2, 2, 2.0, 2, 1));
    model.sectors.push_back(theory::make_flat_sector(1, 2, 2.0, 2, 1));
    const Eigen::Index p = 2;
    const auto samples = theory::sample_gradient_stat(
        model, p, n_samples, stable_hash(config.seed, 2001, stream++),
        config.threads);
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& row : samples.samples) {
      double norm_sq = 0.0;
      for (double v : row) norm_sq += v * v;
      sum += norm_sq;
      sum_sq += norm_sq * norm_sq;
    }
    const double n = static_cast<double>(samples.samples.size());
    const double mean = sum / n;
    const double se =
        std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / n);
    Check c;
    c.name = "gradient_norm_two_sector";
    c.formula = theory::variance_formula(model, p);
    c.estimate = mean;
    c.stderr_value = se;
    c.samples = n_samples;
    c.pass = std::abs(mean - c.formula) <= config.tolerance_sigmas * se;
    all_pass = all_pass && c.pass;
    checks.push_back(check_to_json(c));
  }
  json report = {{"name", "variance"},
                 {"samples", n_samples},
                 {"tolerance_sigmas", config.tolerance_sigmas},
                 {"checks", checks},
                 {"pass", all_pass}};
  return VerifyResult{report.dump(2), all_pass};
}

VerifyResult verify_moments(const ExperimentConfig& config) {
  // Scaled family: GUE Hamiltonian, A = 2 P on half the space,
  // O = -I tensor |0><0| with N_a = 2, state = first basis vector. The
  // closed form Tr(A) Tr(O) / N*^2 is -1/2 at every size.
  const std::vector<Eigen::Index> dims = {8, 32};
  const int draws = 4;
  const Eigen::Index n_samples = std::max<Eigen::Index>(config.verify_samples
                                                            / 10,
                                                        10000);
  json per_dim = json::array();
  std::vector<double> rms_diff;
  bool haar_pass = true;
  for (const Eigen::Index dim : dims) {
    Matrix a_op = Matrix::Zero(dim, dim);
    for (Eigen::Index k = 0; k < dim / 2; ++k) a_op(k, k) = 2.0;
    Matrix proj = Matrix::Zero(2, 2);
    proj(0, 0) = 1.0;
    const Matrix o_op =
        -linalg::kron(Matrix::Identity(dim / 2, dim / 2), proj);
    Vector x_state = Vector::Zero(dim);
    x_state(0) = 1.0;

    json draws_json = json::array();
    double sum_sq_diff = 0.0;
    for (int d = 0; d < draws; ++d) {
      Rng rng = make_rng(stable_hash(config.seed, 3001 + dim, d));
      const Matrix hamiltonian = linalg::random_hermitian(dim, rng);
      const double horizon = config.verify_horizons.empty()
                                 ? 160.0
                                 : config.verify_horizons.back();
      const theory::MomentComparison cmp = theory::moment_compare(
          hamiltonian, a_op, o_op, x_state, horizon, 1, n_samples,
          stable_hash(config.seed, 3101 + dim, d), config.threads);
      sum_sq_diff += cmp.diff * cmp.diff;
      const double closed_gap_re =
          std::abs(cmp.haar_avg.mean.real() - cmp.closed_form.real());
      const double closed_gap_im =
          std::abs(cmp.haar_avg.mean.imag() - cmp.closed_form.imag());
      const bool haar_ok =
          closed_gap_re <=
              config.tolerance_sigmas * cmp.haar_avg.stderr_re &&
          closed_gap_im <= config.tolerance_sigmas * cmp.haar_avg.stderr_im;
      haar_pass = haar_pass && haar_ok;
      draws_json.push_back(
          {{"draw", d},
           {"time_avg", {cmp.time_avg.mean.real(), cmp.time_avg.mean.imag()}},
           {"haar_avg", {cmp.haar_avg.mean.real(), cmp.haar_avg.mean.imag()}},
           {"closed_form",
            {cmp.closed_form.real(), cmp.closed_form.imag()}},
           {"haar_stderr", {cmp.haar_avg.stderr_re, cmp.haar_avg.stderr_im}},
           {"diff", cmp.diff},
           {"haar_matches_closed_form", haar_ok}});
    }
    // Horizon sweep on the first draw, reporting the convergence of the
    // time average as T grows.
    json horizon_json = json::array();
    {
      Rng rng = make_rng(stable_hash(config.seed, 3001 + dim, 0));
      const Matrix hamiltonian = linalg::random_hermitian(dim, rng);
      for (double horizon : config.verify_horizons) {
        const theory::MomentComparison cmp = theory::moment_compare(
            hamiltonian, a_op, o_op, x_state, horizon, 1, n_samples,
            stable_hash(config.seed, 3201 + dim,
                        static_cast<std::uint64_t>(horizon)),
            config.threads);
        horizon_json.push_back({{"T", horizon}, {"diff", cmp.diff}});
      }
    }
    rms_diff.push_back(std::sqrt(sum_sq_diff / draws));
    per_dim.push_back({{"dim", dim},
                       {"samples", n_samples},
                       {"draws", draws_json},
                       {"rms_diff", rms_diff.back()},
                       {"horizon_sweep", horizon_json}});
  }
  const bool trend_pass = rms_diff.back() < rms_diff.front();
  const bool pass = trend_pass && haar_pass;
  json report = {{"name", "moments"},
                 {"order", 1},
                 {"per_dim", per_dim},
                 {"diff_decreases_with_dimension", trend_pass},
                 {"haar_matches_closed_form", haar_pass},
                 {"pass", pass}};
  return VerifyResult{report.dump(2), pass};
}

VerifyResult verify_generalization(const ExperimentConfig& config) {
  ExperimentConfig local = config;
  local.qubits = 4;
  model::Dataset dataset = dataset_for(local);
  model::SystemSpec system = system_for(local, dataset.ancillas);
  Rng decomp_rng = make_rng(stable_hash(config.seed, 4001));
  const algebra::KrylovDecomposition decomp =
      algebra::krylov_decomposition(system.generators, algebra::kBlockTol,
                                    decomp_rng);
  model::tag_sectors(dataset, decomp);
  const model::Dataset extended =
      theory::extend_dataset_multiplicities(dataset, decomp);

  Rng rng = make_rng(stable_hash(config.seed, 4002));
  const Matrix hamiltonian = model::build_hamiltonian(system, rng);
  const Matrix generator_a = model::build_a(system);
  const double horizon =
      config.horizon > 0.0
          ? config.horizon
          : 10.0 * static_cast<double>(system.qubits + system.ancillas);
  const Eigen::Index p = 8;
  const qnn::AnsatzSpec spec =
      qnn::sample_ansatz(p, horizon, hamiltonian, generator_a, rng);
  const qnn::Engine base_engine(spec, dataset);
  const qnn::Engine ext_engine(spec, extended);

  // Order of appended points: for each original x, multiplicity(x) - 1
  // copies in dataset order.
  std::vector<std::size_t> origin;
  for (std::size_t x = 0; x < dataset.points.size(); ++x) {
    const auto mult =
        decomp.sector(dataset.points[x].sector).multiplicity;
    for (Eigen::Index c = 0; c + 1 < mult; ++c) origin.push_back(x);
  }

  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  bool inequality_pass = true;
  bool copies_pass = true;
  double worst_slack = -1.0;
  double worst_copy_gap = 0.0;
  const int theta_draws = 20;
  for (int k = 0; k < theta_draws; ++k) {
    RealVector theta(p);
    for (Eigen::Index i = 0; i < p; ++i) theta(i) = angle(rng);
    const std::vector<double> base = base_engine.per_point_losses(theta);
    const std::vector<double> ext = ext_engine.per_point_losses(theta);
    const double max_base = *std::max_element(base.begin(), base.end());
    double mean_ext = 0.0;
    for (double v : ext) mean_ext += v;
    mean_ext /= static_cast<double>(ext.size());
    const double slack = max_base - mean_ext;
    worst_slack = (k == 0) ? slack : std::min(worst_slack, slack);
    if (mean_ext > max_base + 1e-10) inequality_pass = false;
    for (std::size_t a = 0; a < origin.size(); ++a) {
      const double gap =
          std::abs(ext[dataset.points.size() + a] - base[origin[a]]);
      worst_copy_gap = std::max(worst_copy_gap, gap);
      if (gap > 1e-9) copies_pass = false;
    }
  }
  const bool pass = inequality_pass && copies_pass;
  json report = {{"name", "generalization"},
                 {"theta_draws", theta_draws},
                 {"parameters", p},
                 {"original_points", dataset.points.size()},
                 {"extended_points", extended.points.size()},
                 {"inequality_holds", inequality_pass},
                 {"min_slack", worst_slack},
                 {"copies_match_originals", copies_pass},
                 {"max_copy_loss_gap", worst_copy_gap},
                 {"pass", pass}};
  return VerifyResult{report.dump(2), pass};
}

VerifyResult verify_hessian_rank(const ExperimentConfig& config) {
  ExperimentConfig local = config;
  local.qubits = 4;
  model::Dataset dataset = dataset_for(local);
  model::SystemSpec system = system_for(local, dataset.ancillas);
  Rng decomp_rng = make_rng(stable_hash(config.seed, 5001));
  const algebra::KrylovDecomposition decomp =
      algebra::krylov_decomposition(system.generators, algebra::kBlockTol,
                                    decomp_rng);
  const std::vector<Eigen::Index> p_values = {40, 60, 80};
  const theory::RankCurve curve = theory::hessian_rank_curve(
      system, dataset, p_values, linalg::kDefaultRankTol,
      stable_hash(config.seed, 5002), &decomp, config.horizon);
  json points = json::array();
  for (const theory::RankPoint& pt : curve.points) {
    points.push_back({{"p", pt.p}, {"rank", pt.rank}});
  }
  bool non_decreasing = true;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    if (curve.points[i].rank < curve.points[i - 1].rank) {
      non_decreasing = false;
    }
  }
  const Eigen::Index rank60 = curve.points[1].rank;
  const Eigen::Index rank80 = curve.points[2].rank;
  const bool saturated = rank60 == rank80;
  const bool deficient = rank80 < 80;
  const bool pass = non_decreasing && saturated && deficient;
  json report = {{"name", "hessian-rank"},
                 {"points", points},
                 {"paper_bound", curve.paper_bound},
                 {"rank_non_decreasing", non_decreasing},
                 {"rank_saturates", saturated},
                 {"rank_below_p", deficient},
                 {"pass", pass}};
  return VerifyResult{report.dump(2), pass};
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::bad_argument, std::string("config: invalid JSON: ") +
                                      e.what());
  }
  require(j.is_object(), ErrorCode::bad_argument,
          "config: top level must be a JSON object");
  reject_unknown_keys(j,
                      {"seed", "threads", "scale", "system", "ansatz", "train",
                       "verify", "histogram_bin_width"},
                      "top level");
  ExperimentConfig config;
  config.seed = j.value("seed", std::uint64_t{1});
  config.threads = j.value("threads", 0);
  config.scale = j.value("scale", 1.0);
  require(config.scale > 0.0, ErrorCode::bad_argument,
          "config: scale must be > 0");
  config.histogram_bin_width = j.value("histogram_bin_width", 0.05);

  if (j.contains("system")) {
    const json& s = j["system"];
    reject_unknown_keys(s, {"model", "L", "n_a"}, "system");
    config.model_name = s.value("model", std::string("temperley-lieb"));
    config.qubits = s.value("L", Eigen::Index{4});
    require(config.qubits >= 2, ErrorCode::bad_argument,
            "config: L must be >= 2");
    config.ancilla_override = s.value("n_a", Eigen::Index{0});
    require(config.ancilla_override >= 0, ErrorCode::bad_argument,
            "config: n_a must be >= 0");
  }
  if (j.contains("ansatz")) {
    const json& a = j["ansatz"];
    reject_unknown_keys(a, {"p", "p_values", "T"}, "ansatz");
    require(!(a.contains("p") && a.contains("p_values")),
            ErrorCode::bad_argument, "config: give either p or p_values");
    if (a.contains("p_values")) config.p_values = parse_p_values(a["p_values"]);
    if (a.contains("p")) {
      config.p_values = {a["p"].get<Eigen::Index>()};
      require(config.p_values[0] >= 0, ErrorCode::bad_argument,
              "config: p must be >= 0");
    }
    config.horizon = a.value("T", 0.0);
    require(config.horizon >= 0.0, ErrorCode::bad_argument,
            "config: T must be >= 0");
  }
  if (j.contains("train")) {
    const json& t = j["train"];
    reject_unknown_keys(t,
                        {"learning_rate", "max_epochs", "plateau_window",
                         "plateau_threshold", "target_loss", "trials"},
                        "train");
    config.train.learning_rate = t.value("learning_rate", 0.1);
    config.train.max_epochs = t.value("max_epochs", 200);
    config.train.plateau_window = t.value("plateau_window", 5);
    config.train.plateau_threshold = t.value("plateau_threshold", 0.05);
    config.train.target_loss = t.value("target_loss", 0.01);
    config.trials = t.value("trials", 10);
    require(config.train.learning_rate >= 0.0, ErrorCode::bad_argument,
            "config: learning_rate must be >= 0");
    require(config.train.max_epochs >= 1, ErrorCode::bad_argument,
            "config: max_epochs must be >= 1");
    require(config.train.plateau_window >= 1, ErrorCode::bad_argument,
            "config: plateau_window must be >= 1");
    require(config.trials >= 1, ErrorCode::bad_argument,
            "config: trials must be >= 1");
  }
  if (j.contains("verify")) {
    const json& v = j["verify"];
    reject_unknown_keys(v, {"samples", "tolerance_sigmas", "horizons"},
                        "verify");
    config.verify_samples = v.value("samples", Eigen::Index{100000});
    config.tolerance_sigmas = v.value("tolerance_sigmas", 4.0);
    require(config.verify_samples >= 1, ErrorCode::bad_argument,
            "config: verify samples must be >= 1");
    require(config.tolerance_sigmas > 0.0, ErrorCode::bad_argument,
            "config: tolerance_sigmas must be > 0");
    if (v.contains("horizons")) {
      config.verify_horizons.clear();
      for (const auto& h : v["horizons"]) {
        const double horizon = h.get<double>();
        require(horizon > 0.0, ErrorCode::bad_argument,
                "config: verify horizons must be > 0");
        config.verify_horizons.push_back(horizon);
      }
      require(!config.verify_horizons.empty(), ErrorCode::bad_argument,
              "config: verify horizons must be nonempty");
    }
  }
  apply_scale(config, config.scale);
  config.train.seed = config.seed;
  return config;
}

std::string config_to_json(const ExperimentConfig& config) {
  json j = {
      {"seed", config.seed},
      {"threads", config.threads},
      {"scale", 1.0},
      {"system",
       {{"model", config.model_name},
        {"L", config.qubits},
        {"n_a", config.ancilla_override}}},
      {"ansatz", {{"p_values", config.p_values}, {"T", config.horizon}}},
      {"train",
       {{"learning_rate", config.train.learning_rate},
        {"max_epochs", config.train.max_epochs},
        {"plateau_window", config.train.plateau_window},
        {"plateau_threshold", config.train.plateau_threshold},
        {"target_loss", config.train.target_loss},
        {"trials", config.trials}}},
      {"verify",
       {{"samples", config.verify_samples},
        {"tolerance_sigmas", config.tolerance_sigmas},
        {"horizons", config.verify_horizons}}},
      {"histogram_bin_width", config.histogram_bin_width}};
  return j.dump(2);
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig config;
  if (name == "fig2-4q") {
    config.qubits = 4;
    config.p_values = {1, 5, 10, 20, 40};
    config.trials = 10;
  } else if (name == "fig2-8q") {
    config.qubits = 8;
    config.p_values = {1, 5, 10, 20, 40};
    config.trials = 10;
  } else if (name == "fig3-4q") {
    config.qubits = 4;
    config.p_values = {1, 5, 10, 15, 20, 40};
    config.trials = 1000;
  } else {
    fail(ErrorCode::bad_argument, "unknown preset '" + name + "'");
  }
  return config;
}

void apply_scale(ExperimentConfig& config, double scale) {
  require(scale > 0.0, ErrorCode::bad_argument, "scale must be > 0");
  config.scale = scale;
  if (scale != 1.0) {
    config.trials = std::max(
        1, static_cast<int>(std::lround(config.trials * scale)));
  }
}

DecomposeResult run_decompose(const ExperimentConfig& config) {
  const Eigen::Index ancillas =
      config.ancilla_override > 0 ? config.ancilla_override : 1;
  const model::SystemSpec system = system_for(config, ancillas);
  Rng rng = make_rng(config.seed);
  const algebra::KrylovDecomposition decomp = algebra::krylov_decomposition(
      system.generators, algebra::kBlockTol, rng);

  double max_generator_residual = 0.0;
  for (const Matrix& g : system.generators) {
    max_generator_residual = std::max(
        max_generator_residual, algebra::verify_block_structure(g, decomp));
  }
  const algebra::KrylovDecomposition extended =
      algebra::extend_with_ancilla(decomp, system.ancilla_dim());
  const Matrix hamiltonian = model::build_hamiltonian(system, rng);
  const double hamiltonian_residual =
      algebra::verify_block_structure(hamiltonian, extended);
  const double a_residual =
      algebra::verify_block_structure(model::build_a(system), extended);

  Eigen::Index dim_sum = 0;
  for (const algebra::Sector& s : decomp.sectors) {
    dim_sum += s.irrep_dim * s.multiplicity;
  }
  const bool dims_ok = dim_sum == system.system_dim();
  const double worst = std::max(
      {max_generator_residual, hamiltonian_residual, a_residual});
  const bool pass = dims_ok && worst < algebra::kBlockTol;

  json report = {{"dim", system.system_dim()},
                 {"dimension_sum_matches", dims_ok},
                 {"max_generator_residual", max_generator_residual},
                 {"hamiltonian_residual", hamiltonian_residual},
                 {"a_residual", a_residual},
                 {"tolerance", algebra::kBlockTol},
                 {"pass", pass}};
  return DecomposeResult{algebra::to_json(decomp), report.dump(2), pass};
}

TrainResult run_train(const ExperimentConfig& config) {
  const model::Dataset dataset = dataset_for(config);
  const model::SystemSpec system = system_for(config, dataset.ancillas);
  const std::vector<trainer::TrainingRun> runs =
      trainer::sweep(system, dataset, sweep_config_for(config));
  return TrainResult{trainer::curves_csv(runs), trainer::finals_csv(runs),
                     trainer::summary_json(runs)};
}

MinimaResult run_minima(const ExperimentConfig& config) {
  const model::Dataset dataset = dataset_for(config);
  const model::SystemSpec system = system_for(config, dataset.ancillas);
  const std::vector<trainer::TrainingRun> runs =
      trainer::sweep(system, dataset, sweep_config_for(config));
  const trainer::Histogram hist =
      trainer::minima_histogram(runs, config.histogram_bin_width);
  return MinimaResult{trainer::finals_csv(runs), trainer::histogram_csv(hist),
                      trainer::summary_json(runs)};
}

VerifyResult run_verify(const std::string& check,
                        const ExperimentConfig& config) {
  if (check == "variance") return verify_variance(config);
  if (check == "moments") return verify_moments(config);
  if (check == "generalization") return verify_generalization(config);
  if (check == "hessian-rank") return verify_hessian_rank(config);
  fail(ErrorCode::bad_argument, "unknown verification '" + check + "'");
}

std::string run_dataset_export(const ExperimentConfig& config) {
  model::Dataset dataset = dataset_for(config);
  if (config.qubits <= 6) {
    const model::SystemSpec system = system_for(config, dataset.ancillas);
    Rng rng = make_rng(config.seed);
    const algebra::KrylovDecomposition decomp = algebra::krylov_decomposition(
        system.generators, algebra::kBlockTol, rng);
    model::tag_sectors(dataset, decomp);
  }
  return model::to_json(dataset);
}

}  // namespace fraglab::experiments
