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

#include "fraglab/qnn.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace fraglab::qnn {

namespace {

constexpr double kImagResidueTol = 1e-10;

void finish_spec(AnsatzSpec& spec) {
  require(spec.hamiltonian.rows() == spec.generator_a.rows(),
          ErrorCode::dimension_mismatch,
          "ansatz: hamiltonian and generator must share a dimension");
  spec.ham_eig = linalg::hermitian_eig(spec.hamiltonian);
  spec.a_eig = linalg::hermitian_eig(spec.generator_a);
  const double a_scale = std::max(1.0, spec.generator_a.norm());
  require(spec.a_eig.eigenvalues(0) > -1e-8 * a_scale, ErrorCode::bad_argument,
          "ansatz: generator must be positive semidefinite");
}

double real_with_residue_check(cplx value, const char* what) {
  require(std::abs(value.imag()) < kImagResidueTol,
          ErrorCode::numerical_failure,
          std::string(what) + ": imaginary residue above tolerance");
  return value.real();
}

void check_theta(const AnsatzSpec& spec, const RealVector& theta) {
  require(theta.size() == spec.p, ErrorCode::dimension_mismatch,
          "theta length does not match the parameter count");
  require(theta.allFinite(), ErrorCode::bad_argument,
          "theta must be finite");
}

}  // namespace

AnsatzSpec sample_ansatz(Eigen::Index p, double horizon, Matrix hamiltonian,
                         Matrix generator_a, Rng& rng) {
  require(p >= 0, ErrorCode::bad_argument, "parameter count must be >= 0");
  require(horizon > 0.0, ErrorCode::bad_argument, "time horizon must be > 0");
  std::uniform_real_distribution<double> uniform(0.0, horizon);
  AnsatzSpec spec;
  spec.p = p;
  spec.horizon = horizon;
  spec.times.resize(p);
  for (double& t : spec.times) t = uniform(rng);
  spec.t_prime = uniform(rng);
  spec.t_double_prime = uniform(rng);
  spec.hamiltonian = std::move(hamiltonian);
  spec.generator_a = std::move(generator_a);
  finish_spec(spec);
  return spec;
}

AnsatzSpec make_ansatz(std::vector<double> times, double t_prime,
                       double t_double_prime, double horizon,
                       Matrix hamiltonian, Matrix generator_a) {
  AnsatzSpec spec;
  spec.p = static_cast<Eigen::Index>(times.size());
  spec.horizon = horizon;
  spec.times = std::move(times);
  spec.t_prime = t_prime;
  spec.t_double_prime = t_double_prime;
  spec.hamiltonian = std::move(hamiltonian);
  spec.generator_a = std::move(generator_a);
  finish_spec(spec);
  return spec;
}

Matrix build_unitary(const AnsatzSpec& spec, const RealVector& theta) {
  check_theta(spec, theta);
  Matrix u = linalg::evolve(spec.ham_eig, spec.t_double_prime, +1);
  for (Eigen::Index i = 0; i < spec.p; ++i) {
    u *= linalg::evolve(spec.ham_eig, spec.times[i], -1);
    u *= linalg::evolve(spec.a_eig, theta(i), +1);
    u *= linalg::evolve(spec.ham_eig, spec.times[i], +1);
  }
  u *= linalg::evolve(spec.ham_eig, spec.t_prime, -1);
  return u;
}

double adjusted_loss(double loss_value) { return loss_value + 1.0; }

Engine::Engine(const AnsatzSpec& spec, const model::Dataset& dataset)
    : spec_(&spec) {
  const Eigen::Index dim = spec.dim();
  require(dim == (Eigen::Index(1) << (dataset.qubits + dataset.ancillas)),
          ErrorCode::dimension_mismatch,
          "dataset dimension does not match the ansatz operators");
  require(!dataset.points.empty(), ErrorCode::bad_argument,
          "dataset must be nonempty");

  dressed_.a_rotated.reserve(spec.p);
  for (Eigen::Index i = 0; i < spec.p; ++i) {
    const Matrix e = linalg::evolve(spec.ham_eig, spec.times[i], -1);
    dressed_.a_rotated.push_back(e * spec.generator_a * e.adjoint());
  }
  const Matrix ep = linalg::evolve(spec.ham_eig, spec.t_prime, -1);
  for (const model::DataPoint& point : dataset.points) {
    require(point.state.size() == dim, ErrorCode::dimension_mismatch,
            "dataset state dimension mismatch");
    const Matrix obs =
        model::build_observable(point, dataset.qubits, dataset.ancillas);
    dressed_.obs_rotated.push_back(ep * obs * ep.adjoint());
    dressed_.states.push_back(
        linalg::evolve_apply(spec.ham_eig, spec.t_double_prime, -1,
                             point.state));
  }
}

Engine::ThetaFrame Engine::frame(const RealVector& theta) const {
  const AnsatzSpec& spec = *spec_;
  check_theta(spec, theta);
  ThetaFrame f;
  f.a_conjugated.reserve(spec.p);
  Matrix prefix = Matrix::Identity(spec.dim(), spec.dim());
  for (Eigen::Index i = 0; i < spec.p; ++i) {
    // A~_i = V_{i-1} B_i V_{i-1}^dagger; B_i commutes with its own layer, so
    // the prefix up to i-1 suffices.
    f.a_conjugated.push_back(prefix * dressed_.a_rotated[i] * prefix.adjoint());
    const Matrix e = linalg::evolve(spec.ham_eig, spec.times[i], -1);
    prefix *= e * linalg::evolve(spec.a_eig, theta(i), +1) * e.adjoint();
  }
  f.suffix = std::move(prefix);
  return f;
}

std::vector<double> Engine::per_point_losses(const RealVector& theta) const {
  const ThetaFrame f = frame(theta);
  std::vector<double> out;
  out.reserve(dressed_.states.size());
  for (std::size_t x = 0; x < dressed_.states.size(); ++x) {
    const Vector u =
        f.suffix * (dressed_.obs_rotated[x] * (f.suffix.adjoint() *
                                               dressed_.states[x]));
    const cplx value = dressed_.states[x].dot(u);
    out.push_back(real_with_residue_check(value, "loss"));
  }
  return out;
}

double Engine::loss(const RealVector& theta) const {
  const std::vector<double> per_point = per_point_losses(theta);
  double sum = 0.0;
  for (double v : per_point) sum += v;
  return sum / static_cast<double>(per_point.size());
}

Evaluation Engine::evaluate(const RealVector& theta) const {
  const AnsatzSpec& spec = *spec_;
  const ThetaFrame f = frame(theta);
  const double m = static_cast<double>(dressed_.states.size());
  Evaluation ev;
  ev.gradient = RealVector::Zero(spec.p);
  double loss_sum = 0.0;
  for (std::size_t x = 0; x < dressed_.states.size(); ++x) {
    const Vector& xt = dressed_.states[x];
    const Matrix obs_conj =
        f.suffix * dressed_.obs_rotated[x] * f.suffix.adjoint();
    const Vector u = obs_conj * xt;
    loss_sum += real_with_residue_check(xt.dot(u), "loss");
    for (Eigen::Index i = 0; i < spec.p; ++i) {
      const Vector w = f.a_conjugated[i] * xt;
      const cplx commutator_expval = w.dot(u) - u.dot(w);
      const cplx term = cplx(0.0, 1.0) * commutator_expval;
      ev.gradient(i) += real_with_residue_check(term, "gradient");
    }
  }
  ev.loss = loss_sum / m;
  ev.gradient /= m;
  return ev;
}

RealVector Engine::gradient(const RealVector& theta) const {
  return evaluate(theta).gradient;
}

RealMatrix Engine::hessian(const RealVector& theta) const {
  const AnsatzSpec& spec = *spec_;
  const ThetaFrame f = frame(theta);
  const double m = static_cast<double>(dressed_.states.size());
  RealMatrix h = RealMatrix::Zero(spec.p, spec.p);
  std::vector<Vector> w(spec.p), y(spec.p), z(spec.p);
  for (std::size_t x = 0; x < dressed_.states.size(); ++x) {
    const Vector& xt = dressed_.states[x];
    const Matrix obs_conj =
        f.suffix * dressed_.obs_rotated[x] * f.suffix.adjoint();
    const Vector u = obs_conj * xt;
    for (Eigen::Index i = 0; i < spec.p; ++i) {
      w[i] = f.a_conjugated[i] * xt;
      y[i] = f.a_conjugated[i] * u;
      z[i] = obs_conj * w[i];
    }
    // d_i d_j loss = -(1/M) sum_x <x~| [A~_j, [A~_i, O~_x]] |x~> for i >= j.
    for (Eigen::Index i = 0; i < spec.p; ++i) {
      for (Eigen::Index j = 0; j <= i; ++j) {
        h(i, j) += -2.0 * (w[j].dot(y[i] - z[i])).real();
      }
    }
  }
  h /= m;
  for (Eigen::Index i = 0; i < spec.p; ++i) {
    for (Eigen::Index j = i + 1; j < spec.p; ++j) h(i, j) = h(j, i);
  }
  return h;
}

double loss(const AnsatzSpec& spec, const RealVector& theta,
            const model::Dataset& dataset) {
  return Engine(spec, dataset).loss(theta);
}

std::vector<double> per_point_losses(const AnsatzSpec& spec,
                                     const RealVector& theta,
                                     const model::Dataset& dataset) {
  return Engine(spec, dataset).per_point_losses(theta);
}

RealVector gradient(const AnsatzSpec& spec, const RealVector& theta,
                    const model::Dataset& dataset) {
  return Engine(spec, dataset).gradient(theta);
}

RealMatrix hessian(const AnsatzSpec& spec, const RealVector& theta,
                   const model::Dataset& dataset) {
  return Engine(spec, dataset).hessian(theta);
}

std::vector<std::pair<int, double>> sector_losses(
    const AnsatzSpec& spec, const RealVector& theta,
    const model::Dataset& dataset,
    const algebra::KrylovDecomposition& decomp) {
  check_theta(spec, theta);
  require(decomp.dim() == spec.dim(), ErrorCode::dimension_mismatch,
          "sector_losses: decomposition must cover system plus ancilla");
  std::vector<std::pair<int, double>> out;
  for (const model::DataPoint& point : dataset.points) {
    require(point.sector >= 0, ErrorCode::sector_resolution_failure,
            "sector_losses: dataset points must carry sector tags");
    const algebra::Sector& s = decomp.sector(point.sector);
    const Eigen::Index width = s.irrep_dim * s.multiplicity;
    const Matrix cols = decomp.basis_change.middleCols(s.col_start, width);
    const Matrix obs =
        model::build_observable(point, dataset.qubits, dataset.ancillas);
    AnsatzSpec block = make_ansatz(
        spec.times, spec.t_prime, spec.t_double_prime, spec.horizon,
        cols.adjoint() * spec.hamiltonian * cols,
        cols.adjoint() * spec.generator_a * cols);
    const Matrix u = build_unitary(block, theta);
    const Vector xs = cols.adjoint() * point.state;
    const Matrix obs_block = cols.adjoint() * obs * cols;
    const cplx value = xs.dot(u * obs_block * u.adjoint() * xs);
    out.emplace_back(point.sector,
                     real_with_residue_check(value, "sector loss"));
  }
  return out;
}

std::string to_json(const AnsatzSpec& spec) {
  nlohmann::json j = {{"p", spec.p},
                      {"T", spec.horizon},
                      {"times", spec.times},
                      {"t_prime", spec.t_prime},
                      {"t_double_prime", spec.t_double_prime},
                      {"seed", spec.seed}};
  return j.dump(2);
}

}  // namespace fraglab::qnn
