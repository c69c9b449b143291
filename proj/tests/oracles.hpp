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

// Test-only reference implementations. Each one deliberately takes a
// different algorithmic route than the library path it checks and must stay
// independent of it.

#pragma once

#include <cmath>
#include <vector>

#include "fraglab/common.hpp"
#include "fraglab/model.hpp"
#include "fraglab/qnn.hpp"

namespace oracles {

using fraglab::Matrix;
using fraglab::RealMatrix;
using fraglab::RealVector;
using fraglab::Vector;
using fraglab::cplx;

/// Matrix exponential by scaling and squaring of a plain Taylor series.
inline Matrix expm_taylor(const Matrix& m) {
  const Eigen::Index d = m.rows();
  int squarings = 0;
  double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const Matrix scaled = m / std::pow(2.0, squarings);
  Matrix term = Matrix::Identity(d, d);
  Matrix sum = term;
  for (int k = 1; k <= 24; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Kernel basis by complex Gaussian elimination with partial pivoting.
/// Returns the kernel dimension and (non-orthonormalized) basis columns.
struct RrefKernel {
  Eigen::Index dimension = 0;
  Matrix basis;  // cols = kernel vectors
};

inline RrefKernel rref_kernel(Matrix a, double tol = 1e-10) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  std::vector<Eigen::Index> pivot_col_of_row;
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index best = row;
    for (Eigen::Index r = row + 1; r < rows; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(best, col))) best = r;
    }
    if (std::abs(a(best, col)) <= tol * scale) continue;
    a.row(row).swap(a.row(best));
    a.row(row) /= a(row, col);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r != row && std::abs(a(r, col)) > 0.0) {
        a.row(r) -= a(r, col) * a.row(row);
      }
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(cols, false);
  for (Eigen::Index c : pivot_col_of_row) is_pivot[c] = true;

  RrefKernel out;
  out.dimension = cols - static_cast<Eigen::Index>(pivot_col_of_row.size());
  out.basis = Matrix::Zero(cols, out.dimension);
  Eigen::Index k = 0;
  for (Eigen::Index free_col = 0; free_col < cols; ++free_col) {
    if (is_pivot[free_col]) continue;
    out.basis(free_col, k) = 1.0;
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r) {
      out.basis(pivot_col_of_row[r], k) = -a(r, free_col);
    }
    ++k;
  }
  return out;
}

/// Stacked commutator constraint [X, h_i] = 0 over all generators, as one
/// (m d^2) x d^2 matrix acting on vec(X) (column-major).
inline Matrix commutant_constraint_matrix(const std::vector<Matrix>& gens) {
  const Eigen::Index d = gens.front().rows();
  Matrix id = Matrix::Identity(d, d);
  Matrix stacked(static_cast<Eigen::Index>(gens.size()) * d * d, d * d);
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Matrix left = Matrix::Zero(d * d, d * d);
    for (Eigen::Index a = 0; a < d; ++a) {
      for (Eigen::Index b = 0; b < d; ++b) {
        for (Eigen::Index c = 0; c < d; ++c) {
          // (X h)_{bc} depends on X_{ba}; (h X)_{bc} on X_{ac}.
          left(b + c * d, b + a * d) += gens[i](a, c);
          left(b + c * d, a + c * d) -= gens[i](b, a);
        }
      }
    }
    stacked.middleRows(static_cast<Eigen::Index>(i) * d * d, d * d) = left;
  }
  return stacked;
}

/// Orthonormal basis (trace inner product) of the unital algebra generated
/// by the operators, by closing the span under multiplication.
inline std::vector<Matrix> algebra_closure_basis(
    const std::vector<Matrix>& generators, double tol = 1e-9) {
  const Eigen::Index d = generators.front().rows();
  std::vector<Matrix> basis;
  auto add = [&](Matrix candidate) {
    for (const Matrix& b : basis) {
      const cplx overlap = (b.adjoint() * candidate).trace();
      candidate -= overlap * b;
    }
    const double norm = candidate.norm();
    if (norm > tol) {
      basis.push_back(candidate / norm);
      return true;
    }
    return false;
  };
  add(Matrix::Identity(d, d));
  for (const Matrix& g : generators) add(g);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::size_t size = basis.size();
    for (std::size_t i = 0; i < size; ++i) {
      for (std::size_t j = 0; j < size; ++j) {
        if (add(basis[i] * basis[j])) grew = true;
      }
    }
  }
  return basis;
}

/// Dimension of the intersection of two spans (overlap singular values at 1).
inline Eigen::Index span_intersection_dim(const std::vector<Matrix>& span_a,
                                          const std::vector<Matrix>& span_b) {
  Matrix overlap(span_a.size(), span_b.size());
  for (std::size_t i = 0; i < span_a.size(); ++i) {
    for (std::size_t j = 0; j < span_b.size(); ++j) {
      overlap(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (span_a[i].adjoint() * span_b[j]).trace();
    }
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Matrix>(overlap).singularValues();
  Eigen::Index count = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > 1.0 - 1e-7) ++count;
  }
  return count;
}

/// Central finite differences of the loss.
inline RealVector fd_gradient(const fraglab::qnn::AnsatzSpec& spec,
                              const RealVector& theta,
                              const fraglab::model::Dataset& dataset,
                              double step = 1e-5) {
  const fraglab::qnn::Engine engine(spec, dataset);
  RealVector grad(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    RealVector up = theta, down = theta;
    up(i) += step;
    down(i) -= step;
    grad(i) = (engine.loss(up) - engine.loss(down)) / (2.0 * step);
  }
  return grad;
}

/// Central finite differences of the analytic gradient.
inline RealMatrix fd_hessian(const fraglab::qnn::AnsatzSpec& spec,
                             const RealVector& theta,
                             const fraglab::model::Dataset& dataset,
                             double step = 1e-5) {
  const fraglab::qnn::Engine engine(spec, dataset);
  RealMatrix hess(theta.size(), theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j) {
    RealVector up = theta, down = theta;
    up(j) += step;
    down(j) -= step;
    hess.col(j) = (engine.gradient(up) - engine.gradient(down)) / (2.0 * step);
  }
  return hess;
}

/// Mean and standard error of a sample vector.
struct MeanStderr {
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

inline MeanStderr mean_stderr(const std::vector<double>& values) {
  double sum = 0.0, sum_sq = 0.0;
  for (double v : values) {
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(values.size());
  MeanStderr out;
  out.mean = sum / n;
  out.stderr_of_mean =
      std::sqrt(std::max(0.0, sum_sq / n - out.mean * out.mean) / n);
  return out;
}

}  // namespace oracles
