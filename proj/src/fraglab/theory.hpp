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

#include "fraglab/algebra.hpp"
#include "fraglab/common.hpp"
#include "fraglab/model.hpp"
#include "fraglab/qnn.hpp"

namespace fraglab::theory {

/// Replacement of a PSD block by the matrix with equal nonzero eigenvalues
/// that preserves Tr and Tr of the square whenever r = Tr(A)^2 / Tr(A^2) is
/// an integer. Non-integer r uses ceil(r) projectors with eigenvalue
/// Tr(A) / ceil(r); the preservation residuals are reported.
struct SemiIsotropic {
  Matrix matrix;
  double r_exact = 0.0;
  Eigen::Index r_used = 0;
  double trace_residual = 0.0;
  double second_moment_residual = 0.0;
};
SemiIsotropic semi_isotropic(const Matrix& a_block);

/// One sector of the Gaussian surrogate model: block operators in the block
/// basis, dataset states |q> tensor |0_anc| and their label observables.
struct GaussianSector {
  Eigen::Index irrep_dim = 0;    // N_lambda
  Eigen::Index ancilla_dim = 0;  // N_a
  Matrix a_block;                // PSD, of size N* = N_lambda * N_a
  std::vector<Vector> states;
  std::vector<Matrix> observables;

  Eigen::Index star_dim() const { return irrep_dim * ancilla_dim; }
  Eigen::Index points() const { return static_cast<Eigen::Index>(states.size()); }
};

struct GaussianModelSpec {
  std::vector<GaussianSector> sectors;
  Eigen::Index total_points() const;  // M
};

/// Convenience builder for a single-sector model with a flat-spectrum PSD
/// block a_value * P_rank and Schur-basis states |q=x> tensor |0> labelled
/// 0..points-1.
GaussianSector make_flat_sector(Eigen::Index irrep_dim,
                                Eigen::Index ancilla_dim, double a_value,
                                Eigen::Index a_rank, Eigen::Index points);

/// Samples of the per-component gradient statistic
///   (i / (M N*^2)) <x| g''^dag [g~ A~ g~^dag, g~' O_x g~'^dag] g'' |x>
/// with g'' Haar, g~ and g~' Ginibre, A~ the semi-isotropic replacement.
/// Output: samples[s][component] where components enumerate (sector, x, i)
/// with i < component_count, x-major within sector.
struct GradientStatSamples {
  struct ComponentKey {
    int sector;
    Eigen::Index x;
    Eigen::Index i;
  };
  std::vector<ComponentKey> keys;
  // Row s holds one joint draw of every component (shared g'' and g~' per
  // sector, shared g~_i per (sector, i)).
  std::vector<std::vector<double>> samples;
};
GradientStatSamples sample_gradient_stat(const GaussianModelSpec& model,
                                         Eigen::Index component_count,
                                         Eigen::Index sample_count,
                                         std::uint64_t seed, int threads = 0);

/// Closed-form E ||grad||^2 of the Gaussian model:
/// sum_lambda 2 M_lambda (N_a - 1) Tr((A^lambda)^2) p / (M^2 N_a^4
/// N_lambda^2). Assumes the unit-total-variance complex Gaussian convention
/// of linalg::ginibre.
double variance_formula(const GaussianModelSpec& model, Eigen::Index p);

/// The same closed form for a single component (one x in one sector).
double component_second_moment(const GaussianSector& sector, Eigen::Index m);

struct MomentEstimate {
  cplx mean{0.0, 0.0};
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  Eigen::Index samples = 0;
};

struct MomentComparison {
  MomentEstimate time_avg;
  MomentEstimate haar_avg;
  cplx closed_form{0.0, 0.0};  // Tr(A) Tr(O) / N*^2, meaningful for k = 1
  double diff = 0.0;           // |time mean - haar mean|
};

/// Time-averaged vs Haar-averaged trace statistic of one block. k = 1
/// averages Tr(rho(t'') A(t) O(t')); k = 2 averages the product of the two
/// trace orderings sharing one draw of (t, t', t'').
MomentComparison moment_compare(const Matrix& hamiltonian, const Matrix& a_op,
                                const Matrix& o_op, const Vector& x_state,
                                double horizon, int order,
                                Eigen::Index sample_count, std::uint64_t seed,
                                int threads = 0);

/// Appends, for every training state resolved as a single Schur ray
/// |lambda, q> tensor |w| in the system decomposition, the states with the
/// multiplicity vector w replaced by the remaining members of an orthonormal
/// completion. Labels and sectors are inherited; appended states are
/// orthogonal to their originals.
model::Dataset extend_dataset_multiplicities(
    const model::Dataset& dataset, const algebra::KrylovDecomposition& decomp);

struct RankPoint {
  Eigen::Index p = 0;
  Eigen::Index rank = 0;
};
struct RankCurve {
  std::vector<RankPoint> points;
  Eigen::Index paper_bound = 0;  // 2 M N_a^3 N^3 over the selected sectors
};

/// Numerical rank of the analytic Hessian at a random theta for each p.
/// Each p re-samples the Hamiltonian, the ansatz times and theta from
/// stable_hash(seed, p).
RankCurve hessian_rank_curve(const model::SystemSpec& system,
                             const model::Dataset& dataset,
                             const std::vector<Eigen::Index>& p_values,
                             double tol, std::uint64_t seed,
                             const algebra::KrylovDecomposition* decomp,
                             double horizon = 0.0);

std::string verification_report_json(const std::string& name,
                                     double formula_value, double mc_estimate,
                                     double stderr_value,
                                     Eigen::Index samples, bool pass);

}  // namespace fraglab::theory
