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

#include "fraglab/algebra.hpp"
#include "fraglab/model.hpp"
#include "oracles.hpp"

using namespace fraglab;

namespace {

std::vector<Matrix> hermitian_parts(const algebra::CommutantBasis& basis) {
  std::vector<Matrix> out;
  for (const Matrix& c : basis.elements) {
    out.push_back(0.5 * (c + c.adjoint()));
    out.push_back(cplx(0.0, 0.5) * (c - c.adjoint()));
  }
  // Drop numerically vanishing parts so the set stays a valid generator set.
  std::vector<Matrix> cleaned;
  for (Matrix& m : out) {
    if (m.norm() > 1e-8) cleaned.push_back(std::move(m));
  }
  return cleaned;
}

Eigen::Index dimension_sum(const algebra::KrylovDecomposition& d) {
  Eigen::Index total = 0;
  for (const auto& s : d.sectors) total += s.irrep_dim * s.multiplicity;
  return total;
}

}  // namespace

TEST_CASE("commutant of the identity is the full matrix algebra") {
  const std::vector<Matrix> gens = {Matrix::Identity(4, 4)};
  const auto basis = algebra::commutant_basis(gens);
  CHECK(basis.dim() == 16);
}

TEST_CASE("commutant of an irreducible qubit action is the scalars") {
  const std::vector<Matrix> gens = {model::pauli_x(), model::pauli_z()};
  const auto basis = algebra::commutant_basis(gens);
  CHECK(basis.dim() == 1);
}

TEST_CASE("commutant basis is orthonormal and commutes with the generators") {
  const auto gens = model::tl_generators(3);
  const auto basis = algebra::commutant_basis(gens);
  for (std::size_t i = 0; i < basis.elements.size(); ++i) {
    for (std::size_t j = 0; j < basis.elements.size(); ++j) {
      const cplx overlap =
          (basis.elements[i].adjoint() * basis.elements[j]).trace();
      const double expected = i == j ? 1.0 : 0.0;
      CHECK(std::abs(overlap - expected) < 1e-10);
    }
    for (const Matrix& g : gens) {
      CHECK((basis.elements[i] * g - g * basis.elements[i]).norm() < 1e-8);
    }
  }
}

TEST_CASE("four-qubit commutant dimension matches dense elimination") {
  const auto gens = model::tl_generators(4);
  const auto basis = algebra::commutant_basis(gens);
  const auto oracle =
      oracles::rref_kernel(oracles::commutant_constraint_matrix(gens));
  CHECK(basis.dim() == oracle.dimension);
}

TEST_CASE("krylov decomposition of a single Pauli-Z") {
  Rng rng = make_rng(3);
  const auto d = algebra::krylov_decomposition({model::pauli_z()}, 1e-8, rng);
  REQUIRE(d.sectors.size() == 2);
  for (const auto& s : d.sectors) {
    CHECK(s.irrep_dim == 1);
    CHECK(s.multiplicity == 1);
  }
}

TEST_CASE("krylov decomposition of an irreducible qubit action") {
  Rng rng = make_rng(4);
  const auto d = algebra::krylov_decomposition(
      {model::pauli_x(), model::pauli_z()}, 1e-8, rng);
  REQUIRE(d.sectors.size() == 1);
  CHECK(d.sectors[0].irrep_dim == 2);
  CHECK(d.sectors[0].multiplicity == 1);
}

TEST_CASE("four-qubit decomposition agrees with the closure oracle") {
  const auto gens = model::tl_generators(4);
  Rng rng = make_rng(17);
  const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
  CHECK(dimension_sum(d) == 16);
  CHECK(linalg::unitarity_error(d.basis_change) < 1e-10);

  // Independent route: algebra span by product closure, commutant by
  // elimination, sector count from the span intersection (the center).
  const auto algebra_span = oracles::algebra_closure_basis(gens);
  Eigen::Index sum_n_sq = 0, sum_np_sq = 0;
  for (const auto& s : d.sectors) {
    sum_n_sq += s.irrep_dim * s.irrep_dim;
    sum_np_sq += s.multiplicity * s.multiplicity;
  }
  CHECK(static_cast<Eigen::Index>(algebra_span.size()) == sum_n_sq);

  const auto commutant = algebra::commutant_basis(gens);
  CHECK(commutant.dim() == sum_np_sq);

  const auto center_dim =
      oracles::span_intersection_dim(algebra_span, commutant.elements);
  CHECK(center_dim == static_cast<Eigen::Index>(d.sectors.size()));

  for (const Matrix& g : gens) {
    CHECK(algebra::verify_block_structure(g, d) < 1e-8);
    CHECK(algebra::off_block_mass(g, d) < 1e-8);
    for (const auto& s : d.sectors) {
      CHECK(algebra::copy_agreement_residual(g, d, s.id) < 1e-8);
    }
  }
}

TEST_CASE("decomposition is deterministic for a fixed seed") {
  const auto gens = model::tl_generators(3);
  Rng rng1 = make_rng(55);
  Rng rng2 = make_rng(55);
  const auto d1 = algebra::krylov_decomposition(gens, 1e-8, rng1);
  const auto d2 = algebra::krylov_decomposition(gens, 1e-8, rng2);
  REQUIRE(d1.sectors.size() == d2.sectors.size());
  for (std::size_t i = 0; i < d1.sectors.size(); ++i) {
    CHECK(d1.sectors[i].irrep_dim == d2.sectors[i].irrep_dim);
    CHECK(d1.sectors[i].multiplicity == d2.sectors[i].multiplicity);
    CHECK(d1.sectors[i].col_start == d2.sectors[i].col_start);
  }
  CHECK((d1.basis_change - d2.basis_change).norm() == 0.0);
}

TEST_CASE("sector ordering is by descending irrep dimension") {
  const auto gens = model::tl_generators(4);
  Rng rng = make_rng(91);
  const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
  for (std::size_t i = 1; i < d.sectors.size(); ++i) {
    CHECK(d.sectors[i - 1].irrep_dim >= d.sectors[i].irrep_dim);
  }
}

TEST_CASE("project_block returns identity blocks for the identity") {
  const auto gens = model::tl_generators(3);
  Rng rng = make_rng(5);
  const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
  for (const auto& s : d.sectors) {
    const Matrix block =
        algebra::project_block(Matrix::Identity(8, 8), d, s.id);
    CHECK((block - Matrix::Identity(s.irrep_dim, s.irrep_dim)).norm() < 1e-10);
  }
}

TEST_CASE("project_block flags operators outside the algebra") {
  const auto gens = model::tl_generators(2);
  Rng rng = make_rng(6);
  const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
  // A generic commutant element mixes the degenerate copies, so it leaks
  // across the copy-diagonal structure.
  const auto commutant = algebra::commutant_basis(gens);
  Matrix mixer = Matrix::Zero(4, 4);
  for (const Matrix& c : hermitian_parts(commutant)) mixer += c;
  bool leaked = false;
  try {
    const Matrix block = algebra::project_block(mixer, d, d.sectors[0].id);
    (void)block;
  } catch (const Error& e) {
    leaked = e.code() == ErrorCode::block_leakage;
  }
  const double copy_residual = [&] {
    double worst = 0.0;
    for (const auto& s : d.sectors) {
      worst = std::max(worst, algebra::copy_agreement_residual(mixer, d, s.id));
    }
    return worst;
  }();
  CHECK((leaked || copy_residual > 1e-8));
}

TEST_CASE("verify_block_structure distinguishes members from outsiders") {
  const auto gens = model::tl_generators(3);
  Rng rng = make_rng(7);
  const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
  Matrix combo = Matrix::Zero(8, 8);
  combo = 0.3 * gens[0] - 1.7 * gens[1];
  CHECK(algebra::verify_block_structure(combo, d) < 1e-8);
  CHECK(algebra::verify_block_structure(Matrix::Identity(8, 8), d) < 1e-12);
  const Matrix random = linalg::random_hermitian(8, rng);
  CHECK(algebra::verify_block_structure(random, d) > 1e-4);
}

TEST_CASE("bicommutant dimension equals the algebra dimension") {
  for (Eigen::Index qubits : {2, 3}) {
    const auto gens = model::tl_generators(qubits);
    Rng rng = make_rng(70 + qubits);
    const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
    Eigen::Index sum_n_sq = 0;
    for (const auto& s : d.sectors) sum_n_sq += s.irrep_dim * s.irrep_dim;
    const auto commutant = algebra::commutant_basis(gens);
    const auto double_commutant =
        algebra::commutant_basis(hermitian_parts(commutant));
    CHECK(double_commutant.dim() == sum_n_sq);
  }
}

TEST_CASE("extend_with_ancilla scales sectors and preserves structure") {
  const auto gens = model::tl_generators(2);
  Rng rng = make_rng(8);
  const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
  const auto ext = algebra::extend_with_ancilla(d, 2);
  CHECK(ext.dim() == 8);
  CHECK(dimension_sum(ext) == 8);
  for (std::size_t i = 0; i < d.sectors.size(); ++i) {
    CHECK(ext.sectors[i].irrep_dim == 2 * d.sectors[i].irrep_dim);
    CHECK(ext.sectors[i].multiplicity == d.sectors[i].multiplicity);
  }
  // Lifted algebra elements stay block diagonal in the extended structure.
  const Matrix lifted = linalg::kron(gens[0], Matrix::Identity(2, 2));
  CHECK(algebra::verify_block_structure(lifted, ext) < 1e-8);
}

TEST_CASE("decomposition export carries dims, sectors and the basis") {
  const auto gens = model::tl_generators(2);
  Rng rng = make_rng(9);
  const auto d = algebra::krylov_decomposition(gens, 1e-8, rng);
  const std::string text = algebra::to_json(d);
  CHECK(text.find("\"dim\": 4") != std::string::npos);
  CHECK(text.find("irrep_dim") != std::string::npos);
  CHECK(text.find("basis_change") != std::string::npos);
}

TEST_CASE("mismatched generator dimensions are rejected") {
  const std::vector<Matrix> gens = {Matrix::Identity(2, 2),
                                    Matrix::Identity(4, 4)};
  CHECK_THROWS_AS(algebra::commutant_basis(gens), Error);
}
