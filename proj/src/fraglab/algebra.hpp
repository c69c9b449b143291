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
#include "fraglab/linalg.hpp"

namespace fraglab::algebra {

inline constexpr double kBlockTol = 1e-8;

/// One isotypic component of the decomposition. The basis-change columns
/// [col_start, col_start + irrep_dim * multiplicity) hold this sector,
/// ordered copy-by-copy: copy p occupies columns
/// col_start + p * irrep_dim ... col_start + (p + 1) * irrep_dim - 1.
struct Sector {
  int id = 0;
  Eigen::Index irrep_dim = 0;     // N_lambda
  Eigen::Index multiplicity = 0;  // N'_lambda
  Eigen::Index col_start = 0;
};

struct KrylovDecomposition {
  Matrix basis_change;  // unitary on the decomposed space
  std::vector<Sector> sectors;
  std::vector<int> selected;  // retained sector ids; defaults to all

  Eigen::Index dim() const { return basis_change.rows(); }
  const Sector& sector(int id) const;
};

struct CommutantBasis {
  std::vector<Matrix> elements;  // orthonormal under the trace inner product
  Eigen::Index dim() const { return static_cast<Eigen::Index>(elements.size()); }
};

/// Orthonormal basis of {X : [X, h] = 0 for every generator h}, obtained as
/// the kernel of the stacked Sylvester operators.
CommutantBasis commutant_basis(const std::vector<Matrix>& generators,
                               double tol = linalg::kDefaultRankTol);

/// Decomposes the space into isotypic sectors of the algebra generated by
/// `generators`. A generic Hermitian commutant element is eigendecomposed;
/// its eigenspaces are the irreducible copies. A second generic commutant
/// element groups copies into sectors and supplies the intertwiners that
/// align the copy bases, so that every algebra element takes the same block
/// on each copy. Resamples on accidental degeneracy, up to eight times.
KrylovDecomposition krylov_decomposition(const std::vector<Matrix>& generators,
                                         double tol, Rng& rng);

/// Frobenius norm of everything outside the copy-diagonal block structure
/// after conjugation by basis_change (cross-sector plus cross-copy mass).
double off_block_mass(const Matrix& op, const KrylovDecomposition& decomp);

/// Frobenius norm of the cross-sector blocks only.
double verify_block_structure(const Matrix& op,
                              const KrylovDecomposition& decomp);

/// One irrep copy (the first) of op's block in the given sector. Throws
/// ErrorCode::block_leakage when op has off-block mass above tol.
Matrix project_block(const Matrix& op, const KrylovDecomposition& decomp,
                     int sector_id, double tol = kBlockTol);

/// Max pairwise Frobenius distance between the sector's copy blocks.
double copy_agreement_residual(const Matrix& op,
                               const KrylovDecomposition& decomp,
                               int sector_id);

/// Tensors an ancilla factor of dimension anc_dim onto the decomposed space;
/// sector irrep dimensions scale by anc_dim, multiplicities are unchanged.
KrylovDecomposition extend_with_ancilla(const KrylovDecomposition& decomp,
                                        Eigen::Index anc_dim);

std::string to_json(const KrylovDecomposition& decomp);

}  // namespace fraglab::algebra
