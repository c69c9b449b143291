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

#include "fraglab/qnn.hpp"
#include "fraglab/theory.hpp"
#include "oracles.hpp"

using namespace fraglab;

namespace {

/// Random instance: TL system, random Hamiltonian, default A, random
/// synthetic dataset of product states with distinct labels.
struct Instance {
  model::SystemSpec system;
  model::Dataset dataset;
  qnn::AnsatzSpec spec;
  RealVector theta;
};

Instance random_instance(Eigen::Index qubits, Eigen::Index ancillas,
                         Eigen::Index p, Eigen::Index points, Rng& rng) {
  Instance inst;
  inst.system = model::make_tl_system(qubits, ancillas);
  const Matrix hamiltonian = model::build_hamiltonian(inst.system, rng);
  const Matrix a = model::build_a(inst.system);
  inst.spec = qnn::sample_ansatz(
      p, 10.0 * static_cast<double>(qubits + ancillas), hamiltonian, a, rng);
  inst.dataset.qubits = qubits;
  inst.dataset.ancillas = ancillas;
  const Eigen::Index sys_dim = inst.system.system_dim();
  const Eigen::Index anc_dim = inst.system.ancilla_dim();
  for (Eigen::Index x = 0; x < points; ++x) {
    model::DataPoint point;
    const Vector sys = linalg::haar_unitary(sys_dim, rng).col(0);
    point.state = Vector::Zero(sys_dim * anc_dim);
    for (Eigen::Index i = 0; i < sys_dim; ++i) {
      point.state(i * anc_dim) = sys(i);
    }
    point.label = static_cast<int>(x % anc_dim);
    inst.dataset.points.push_back(std::move(point));
  }
  std::normal_distribution<double> gauss(0.0, 1.0);
  inst.theta = RealVector(p);
  for (Eigen::Index i = 0; i < p; ++i) inst.theta(i) = gauss(rng);
  return inst;
}

}  // namespace

TEST_CASE("ansatz sampling ranges and determinism") {
  const auto system = model::make_tl_system(2, 1);
  Rng rng = make_rng(1);
  const Matrix h = model::build_hamiltonian(system, rng);
  const Matrix a = model::build_a(system);

  Rng s1 = make_rng(42);
  const auto zero = qnn::sample_ansatz(0, 40.0, h, a, s1);
  CHECK(zero.times.empty());
  CHECK(zero.t_prime >= 0.0);
  CHECK(zero.t_double_prime <= 40.0);

  Rng s2 = make_rng(42);
  Rng s3 = make_rng(42);
  const auto big1 = qnn::sample_ansatz(40, 40.0, h, a, s2);
  const auto big2 = qnn::sample_ansatz(40, 40.0, h, a, s3);
  CHECK(big1.times.size() == 40);
  for (double t : big1.times) {
    CHECK(t >= 0.0);
    CHECK(t <= 40.0);
  }
  CHECK(big1.times == big2.times);
  CHECK(big1.t_prime == big2.t_prime);
  CHECK(big1.t_double_prime == big2.t_double_prime);
}

TEST_CASE("unitary at theta = 0 collapses to the bare evolutions") {
  Rng rng = make_rng(2);
  const auto inst = random_instance(2, 1, 4, 1, rng);
  const Matrix u = qnn::build_unitary(inst.spec, RealVector::Zero(4));
  const Matrix expected =
      linalg::evolve(inst.spec.ham_eig, inst.spec.t_double_prime, +1) *
      linalg::evolve(inst.spec.ham_eig, inst.spec.t_prime, -1);
  CHECK((u - expected).norm() < 1e-12);
}

TEST_CASE("unitary with a vanishing Hamiltonian adds the angles") {
  const auto system = model::make_tl_system(2, 1);
  const Matrix zero_h = Matrix::Zero(8, 8);
  const Matrix a = model::build_a(system);
  const auto spec = qnn::make_ansatz({1.0, 2.0, 3.0}, 0.7, 0.3, 10.0, zero_h, a);
  RealVector theta(3);
  theta << 0.4, -1.1, 0.25;
  const Matrix u = qnn::build_unitary(spec, theta);
  const Matrix direct = linalg::evolve(spec.a_eig, theta.sum(), +1);
  CHECK((u - direct).norm() < 1e-10);
}

TEST_CASE("unitary matches a Taylor-expm oracle") {
  Rng rng = make_rng(3);
  const auto inst = random_instance(2, 1, 3, 1, rng);
  const Matrix u = qnn::build_unitary(inst.spec, inst.theta);
  CHECK(linalg::unitarity_error(u) < 1e-9);

  const cplx im(0.0, 1.0);
  Matrix expected = oracles::expm_taylor(
      im * inst.spec.t_double_prime * inst.spec.hamiltonian);
  for (Eigen::Index i = 0; i < inst.spec.p; ++i) {
    expected *= oracles::expm_taylor(-im * inst.spec.times[i] *
                                     inst.spec.hamiltonian);
    expected *= oracles::expm_taylor(im * inst.theta(i) *
                                     inst.spec.generator_a);
    expected *= oracles::expm_taylor(im * inst.spec.times[i] *
                                     inst.spec.hamiltonian);
  }
  expected *=
      oracles::expm_taylor(-im * inst.spec.t_prime * inst.spec.hamiltonian);
  CHECK((u - expected).norm() < 1e-8);
}

TEST_CASE("loss pinned values with a trivial ansatz") {
  const auto system = model::make_tl_system(2, 1);
  const Matrix zero_h = Matrix::Zero(8, 8);
  const Matrix a = model::build_a(system);
  const auto spec = qnn::make_ansatz({}, 0.0, 0.0, 1.0, zero_h, a);

  model::Dataset dataset;
  dataset.qubits = 2;
  dataset.ancillas = 1;
  model::DataPoint point;
  point.state = Vector::Zero(8);
  point.state(0) = 1.0;  // |00> tensor |0>
  point.label = 0;
  dataset.points.push_back(point);
  CHECK(qnn::loss(spec, RealVector(0), dataset) ==
        doctest::Approx(-1.0).epsilon(1e-12));

  dataset.points[0].label = 1;
  CHECK(qnn::loss(spec, RealVector(0), dataset) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("loss equals the dense conjugation oracle") {
  Rng rng = make_rng(5);
  const auto inst = random_instance(3, 1, 4, 2, rng);
  const double fast = qnn::loss(inst.spec, inst.theta, inst.dataset);
  const Matrix u = qnn::build_unitary(inst.spec, inst.theta);
  double slow = 0.0;
  for (const auto& point : inst.dataset.points) {
    const Matrix obs = model::build_observable(point, 3, 1);
    const Matrix conj = u * obs * u.adjoint();
    slow += (point.state.adjoint() * conj * point.state)(0).real();
  }
  slow /= static_cast<double>(inst.dataset.points.size());
  CHECK(fast == doctest::Approx(slow).epsilon(1e-10));
}

TEST_CASE("loss stays within the observable spectrum bounds") {
  Rng rng = make_rng(6);
  for (int trial = 0; trial < 8; ++trial) {
    const auto inst = random_instance(2, 1, 3, 2, rng);
    const double value = qnn::loss(inst.spec, inst.theta, inst.dataset);
    CHECK(value <= 1e-12);
    CHECK(value >= -1.0 - 1e-12);
  }
}

TEST_CASE("adjusted loss is the affine shift") {
  CHECK(qnn::adjusted_loss(-1.0) == doctest::Approx(0.0));
  CHECK(qnn::adjusted_loss(0.0) == doctest::Approx(1.0));
  CHECK(qnn::adjusted_loss(-0.25) == doctest::Approx(0.75));
}

TEST_CASE("gradient vanishes when the generator is a multiple of the identity") {
  Rng rng = make_rng(7);
  auto inst = random_instance(2, 1, 4, 1, rng);
  const auto spec = qnn::make_ansatz(inst.spec.times, inst.spec.t_prime,
                                     inst.spec.t_double_prime,
                                     inst.spec.horizon, inst.spec.hamiltonian,
                                     2.0 * Matrix::Identity(8, 8));
  const RealVector g = qnn::gradient(spec, inst.theta, inst.dataset);
  CHECK(g.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("gradient of a parameterless ansatz is empty") {
  Rng rng = make_rng(8);
  const auto inst = random_instance(2, 1, 0, 1, rng);
  const RealVector g = qnn::gradient(inst.spec, RealVector(0), inst.dataset);
  CHECK(g.size() == 0);
}

TEST_CASE("gradient matches central finite differences") {
  Rng rng = make_rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(2 + trial % 3, 1 + trial % 2,
                                      1 + trial % 6, 1 + trial % 2, rng);
    const RealVector analytic =
        qnn::gradient(inst.spec, inst.theta, inst.dataset);
    const RealVector fd =
        oracles::fd_gradient(inst.spec, inst.theta, inst.dataset);
    CHECK((analytic - fd).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("hessian vanishes for an identity generator") {
  Rng rng = make_rng(10);
  auto inst = random_instance(2, 1, 3, 1, rng);
  const auto spec = qnn::make_ansatz(inst.spec.times, inst.spec.t_prime,
                                     inst.spec.t_double_prime,
                                     inst.spec.horizon, inst.spec.hamiltonian,
                                     Matrix::Identity(8, 8));
  const RealMatrix h = qnn::hessian(spec, inst.theta, inst.dataset);
  CHECK(h.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("one-parameter hessian equals the second difference of the loss") {
  Rng rng = make_rng(11);
  const auto inst = random_instance(2, 1, 1, 1, rng);
  const RealMatrix h = qnn::hessian(inst.spec, inst.theta, inst.dataset);
  const qnn::Engine engine(inst.spec, inst.dataset);
  const double step = 1e-4;
  RealVector up = inst.theta, down = inst.theta;
  up(0) += step;
  down(0) -= step;
  const double second =
      (engine.loss(up) - 2.0 * engine.loss(inst.theta) + engine.loss(down)) /
      (step * step);
  CHECK(h(0, 0) == doctest::Approx(second).epsilon(1e-4));
}

TEST_CASE("hessian is symmetric and matches differentiated gradients") {
  Rng rng = make_rng(12);
  const auto inst = random_instance(2, 1, 5, 2, rng);
  const RealMatrix h = qnn::hessian(inst.spec, inst.theta, inst.dataset);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-9);
  const RealMatrix fd =
      oracles::fd_hessian(inst.spec, inst.theta, inst.dataset);
  CHECK((h - fd).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("loss decomposes into per-sector block-basis contributions") {
  Rng rng = make_rng(13);
  auto inst = random_instance(4, 1, 3, 0, rng);
  inst.dataset = model::paper_dataset(4);
  Rng decomp_rng = make_rng(14);
  const auto decomp = algebra::krylov_decomposition(
      inst.system.generators, 1e-8, decomp_rng);
  model::tag_sectors(inst.dataset, decomp);
  const auto extended = algebra::extend_with_ancilla(decomp, 2);

  const auto sector_terms =
      qnn::sector_losses(inst.spec, inst.theta, inst.dataset, extended);
  double total = 0.0;
  for (const auto& [sector, value] : sector_terms) total += value;
  total /= static_cast<double>(inst.dataset.size());
  const double direct = qnn::loss(inst.spec, inst.theta, inst.dataset);
  CHECK(total == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("extended datasets never beat the worst training point") {
  Rng rng = make_rng(15);
  auto inst = random_instance(4, 1, 6, 0, rng);
  inst.dataset = model::paper_dataset(4);
  Rng decomp_rng = make_rng(16);
  const auto decomp = algebra::krylov_decomposition(
      inst.system.generators, 1e-8, decomp_rng);
  model::tag_sectors(inst.dataset, decomp);
  const auto extended =
      theory::extend_dataset_multiplicities(inst.dataset, decomp);
  CHECK(extended.size() > inst.dataset.size());

  const qnn::Engine base(inst.spec, inst.dataset);
  const qnn::Engine ext(inst.spec, extended);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int draw = 0; draw < 5; ++draw) {
    RealVector theta(inst.spec.p);
    for (Eigen::Index i = 0; i < theta.size(); ++i) theta(i) = gauss(rng);
    const auto base_losses = base.per_point_losses(theta);
    const auto ext_losses = ext.per_point_losses(theta);
    const double worst =
        *std::max_element(base_losses.begin(), base_losses.end());
    double mean = 0.0;
    for (double v : ext_losses) mean += v;
    mean /= static_cast<double>(ext_losses.size());
    CHECK(mean <= worst + 1e-10);
  }
}

TEST_CASE("theta of the wrong length is rejected") {
  Rng rng = make_rng(17);
  const auto inst = random_instance(2, 1, 3, 1, rng);
  CHECK_THROWS_AS(qnn::loss(inst.spec, RealVector::Zero(2), inst.dataset),
                  Error);
}

TEST_CASE("ansatz JSON lists the sampled times") {
  Rng rng = make_rng(18);
  const auto inst = random_instance(2, 1, 2, 1, rng);
  const std::string text = qnn::to_json(inst.spec);
  CHECK(text.find("\"p\": 2") != std::string::npos);
  CHECK(text.find("t_prime") != std::string::npos);
  CHECK(text.find("times") != std::string::npos);
}
