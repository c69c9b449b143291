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

#include "fraglab/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

namespace fraglab::linalg {

double hermiticity_error(const Matrix& op) {
  return (op - op.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& op, double tol) {
  if (op.rows() != op.cols() || op.rows() == 0) return false;
  return op.allFinite() && hermiticity_error(op) < tol;
}

EigenSystem hermitian_eig(const Matrix& op) {
  require(op.rows() == op.cols() && op.rows() >= 1,
          ErrorCode::dimension_mismatch, "hermitian_eig: operator not square");
  require(is_hermitian(op), ErrorCode::not_hermitian,
          "hermitian_eig: operator fails the Hermitian symmetry check");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(op);
  require(solver.info() == Eigen::Success, ErrorCode::numerical_failure,
          "hermitian_eig: eigensolver did not converge");
  return EigenSystem{solver.eigenvalues(), solver.eigenvectors()};
}

Matrix evolve(const Matrix& op, double t, int sign) {
  return evolve(hermitian_eig(op), t, sign);
}

Matrix evolve(const EigenSystem& es, double t, int sign) {
  const Vector phases =
      (cplx(0.0, sign * t) * es.eigenvalues.cast<cplx>().array()).exp();
  return es.eigenvectors * phases.asDiagonal() * es.eigenvectors.adjoint();
}

Vector evolve_apply(const EigenSystem& es, double t, int sign,
                    const Vector& v) {
  const Vector phases =
      (cplx(0.0, sign * t) * es.eigenvalues.cast<cplx>().array()).exp();
  return es.eigenvectors *
         (phases.array() * (es.eigenvectors.adjoint() * v).array()).matrix();
}

Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  require(rows >= 1 && cols >= 1, ErrorCode::bad_argument,
          "ginibre: rows and cols must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0 / std::sqrt(2.0));
  Matrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      out(r, c) = cplx(re, im);
    }
  }
  return out;
}

Matrix haar_unitary(Eigen::Index dim, Rng& rng) {
  require(dim >= 1, ErrorCode::bad_argument, "haar_unitary: dim must be >= 1");
  const Matrix z = ginibre(dim, dim, rng);
  Eigen::HouseholderQR<Matrix> qr(z);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the phase gauge so the distribution is two-sided Haar invariant.
  for (Eigen::Index j = 0; j < dim; ++j) {
    const cplx d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0.0) ? d / a : cplx(1.0, 0.0);
  }
  return q;
}

Matrix random_hermitian(Eigen::Index dim, Rng& rng) {
  const Matrix g = ginibre(dim, dim, rng);
  return 0.5 * (g + g.adjoint());
}

namespace {

RealVector singular_values(const Matrix& op) {
  if (std::min(op.rows(), op.cols()) <= 16) {
    return Eigen::JacobiSVD<Matrix>(op).singularValues();
  }
  return Eigen::BDCSVD<Matrix>(op).singularValues();
}

}  // namespace

Eigen::Index numerical_rank(const Matrix& op, double tol) {
  require(tol > 0.0, ErrorCode::bad_argument, "numerical_rank: tol must be > 0");
  const RealVector sv = singular_values(op);
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  const double cutoff = tol * sv(0);
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

Matrix nullspace(const Matrix& map, double tol) {
  require(tol > 0.0, ErrorCode::bad_argument, "nullspace: tol must be > 0");
  const bool small = std::min(map.rows(), map.cols()) <= 16;
  Matrix v;
  RealVector sv;
  if (small) {
    Eigen::JacobiSVD<Matrix> svd(map, Eigen::ComputeFullV);
    v = svd.matrixV();
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Matrix> svd(map, Eigen::ComputeFullV);
    v = svd.matrixV();
    sv = svd.singularValues();
  }
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double cutoff = tol * smax;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return v.rightCols(map.cols() - rank);
}

Matrix kron(const Matrix& a, const Matrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

double unitarity_error(const Matrix& u) {
  const Matrix gram = u.adjoint() * u;
  return (gram - Matrix::Identity(u.cols(), u.cols())).norm();
}

}  // namespace fraglab::linalg
