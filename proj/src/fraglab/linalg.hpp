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

#include "fraglab/common.hpp"

namespace fraglab::linalg {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kDefaultRankTol = 1e-8;

/// Eigendecomposition of a Hermitian operator, cached so that many matrix
/// exponentials of the same generator reuse one factorization.
struct EigenSystem {
  RealVector eigenvalues;  // ascending
  Matrix eigenvectors;     // unitary, columns match eigenvalues
};

double hermiticity_error(const Matrix& op);
bool is_hermitian(const Matrix& op, double tol = kHermitianTol);

/// Throws ErrorCode::not_hermitian when the symmetry check fails.
EigenSystem hermitian_eig(const Matrix& op);

/// exp(sign * i * op * t) through the eigendecomposition of `op`.
Matrix evolve(const Matrix& op, double t, int sign = +1);
Matrix evolve(const EigenSystem& es, double t, int sign = +1);

/// Applies exp(sign * i * op * t) to a vector without forming the unitary.
Vector evolve_apply(const EigenSystem& es, double t, int sign, const Vector& v);

/// Haar-distributed unitary via a Ginibre draw followed by QR with the
/// R-diagonal phases folded back into Q.
Matrix haar_unitary(Eigen::Index dim, Rng& rng);

/// Matrix of i.i.d. standard complex Gaussian entries. Convention: real and
/// imaginary parts are independent N(0, 1/2), so each complex entry has unit
/// total variance, E|z|^2 = 1. The closed-form moments in fraglab::theory
/// assume exactly this normalization.
Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Hermitian matrix with GUE-like entries, (G + G^dagger)/2 of a Ginibre G.
Matrix random_hermitian(Eigen::Index dim, Rng& rng);

/// Count of singular values above tol * sigma_max.
Eigen::Index numerical_rank(const Matrix& op, double tol = kDefaultRankTol);

/// Orthonormal basis (as columns) of {x : M x = 0}, with singular values
/// at or below tol * sigma_max treated as zero.
Matrix nullspace(const Matrix& map, double tol = kDefaultRankTol);

Matrix kron(const Matrix& a, const Matrix& b);

double unitarity_error(const Matrix& u);

}  // namespace fraglab::linalg
