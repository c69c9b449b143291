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

#include "fraglab/algebra.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

namespace fraglab::algebra {

namespace {

constexpr double kEigGapTol = 1e-6;
constexpr int kMaxDraws = 8;

void check_generators(const std::vector<Matrix>& generators) {
  require(!generators.empty(), ErrorCode::bad_argument,
          "generator set must be nonempty");
  const Eigen::Index dim = generators.front().rows();
  for (const Matrix& g : generators) {
    require(g.rows() == dim && g.cols() == dim, ErrorCode::dimension_mismatch,
            "generators must share a common square dimension");
    require(linalg::is_hermitian(g), ErrorCode::not_hermitian,
            "generators must be Hermitian");
  }
}

/// (h^T kron I) - (I kron h): the column-major vectorization of X -> [X, h].
Matrix sylvester_operator(const Matrix& h) {
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  return linalg::kron(h.transpose(), id) - linalg::kron(id, h);
}

Matrix draw_hermitian_commutant_element(const CommutantBasis& basis, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  const Eigen::Index d = basis.elements.front().rows();
  Matrix c = Matrix::Zero(d, d);
  for (const Matrix& x : basis.elements) c += gauss(rng) * x;
  // The kernel basis is not Hermitian element-wise; the commutant is
  // *-closed, so the Hermitian part is again a commutant element.
  return 0.5 * (c + c.adjoint());
}

struct Cluster {
  Matrix basis;        // orthonormal columns spanning one irrep copy
  Eigen::Index index;  // position in ascending-eigenvalue order
};

std::vector<Cluster> cluster_eigenspaces(const linalg::EigenSystem& es) {
  std::vector<Cluster> clusters;
  const Eigen::Index d = es.eigenvalues.size();
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= d; ++i) {
    if (i == d || es.eigenvalues(i) - es.eigenvalues(i - 1) > kEigGapTol) {
      clusters.push_back(Cluster{es.eigenvectors.middleCols(start, i - start),
                                 static_cast<Eigen::Index>(clusters.size())});
      start = i;
    }
  }
  return clusters;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

/// Closest unitary to m (the unitary polar factor).
Matrix polar_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

struct Attempt {
  bool ok = false;
  KrylovDecomposition decomp;
};

Attempt attempt_decomposition(const std::vector<Matrix>& generators,
                              const CommutantBasis& commutant, double tol,
                              Rng& rng) {
  const Eigen::Index d = generators.front().rows();
  const Matrix c1 = draw_hermitian_commutant_element(commutant, rng);
  const Matrix c2 = draw_hermitian_commutant_element(commutant, rng);
  const double c2_scale = std::max(c2.norm(), 1e-300);

  std::vector<Cluster> clusters = cluster_eigenspaces(linalg::hermitian_eig(c1));
  const int n = static_cast<int>(clusters.size());

  // Copies of the same irrep are exactly the clusters connected through a
  // generic commutant element; distinct sectors have strictly zero coupling.
  UnionFind groups(n);
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (clusters[a].basis.cols() != clusters[b].basis.cols()) continue;
      const double cross =
          (clusters[a].basis.adjoint() * c2 * clusters[b].basis).norm();
      if (cross > 1e-7 * c2_scale) groups.unite(a, b);
    }
  }

  std::vector<std::vector<int>> members(n);
  for (int a = 0; a < n; ++a) members[groups.find(a)].push_back(a);

  struct Group {
    Eigen::Index irrep_dim;
    std::vector<int> copies;  // cluster indices, ascending
  };
  std::vector<Group> sectors_raw;
  for (auto& m : members) {
    if (m.empty()) continue;
    std::sort(m.begin(), m.end());
    const Eigen::Index nd = clusters[m.front()].basis.cols();
    for (int c : m) {
      if (clusters[c].basis.cols() != nd) return {};  // inconsistent; resample
    }
    sectors_raw.push_back(Group{nd, std::move(m)});
  }
  std::sort(sectors_raw.begin(), sectors_raw.end(),
            [](const Group& x, const Group& y) {
              if (x.irrep_dim != y.irrep_dim) return x.irrep_dim > y.irrep_dim;
              return x.copies.front() < y.copies.front();
            });

  KrylovDecomposition out;
  out.basis_change.resize(d, d);
  Eigen::Index col = 0;
  for (std::size_t s = 0; s < sectors_raw.size(); ++s) {
    const Group& g = sectors_raw[s];
    const Matrix& ref = clusters[g.copies.front()].basis;
    Sector sec;
    sec.id = static_cast<int>(s);
    sec.irrep_dim = g.irrep_dim;
    sec.multiplicity = static_cast<Eigen::Index>(g.copies.size());
    sec.col_start = col;
    for (std::size_t p = 0; p < g.copies.size(); ++p) {
      const Matrix& vc = clusters[g.copies[p]].basis;
      if (p == 0) {
        out.basis_change.middleCols(col, g.irrep_dim) = vc;
      } else {
        // Intertwiner alignment: V_c^dagger C2 V_ref is a scalar multiple of
        // a unitary between copies of the same irrep; its polar factor maps
        // the reference copy basis onto copy p up to a global phase.
        const Matrix m = vc.adjoint() * c2 * ref;
        Eigen::JacobiSVD<Matrix> svd(m);
        if (svd.singularValues()(0) < 1e-10 * c2_scale) return {};
        out.basis_change.middleCols(col, g.irrep_dim) = vc * polar_unitary(m);
      }
      col += g.irrep_dim;
    }
    out.sectors.push_back(sec);
    out.selected.push_back(sec.id);
  }
  if (col != d) return {};

  for (const Matrix& g : generators) {
    if (off_block_mass(g, out) > tol) return {};
    for (const Sector& sec : out.sectors) {
      if (copy_agreement_residual(g, out, sec.id) > tol) return {};
    }
  }
  return Attempt{true, std::move(out)};
}

}  // namespace

const Sector& KrylovDecomposition::sector(int id) const {
  for (const Sector& s : sectors) {
    if (s.id == id) return s;
  }
  fail(ErrorCode::bad_argument, "unknown sector id");
}

CommutantBasis commutant_basis(const std::vector<Matrix>& generators,
                               double tol) {
  check_generators(generators);
  const Eigen::Index d = generators.front().rows();
  const Eigen::Index m = static_cast<Eigen::Index>(generators.size());
  Matrix stacked(m * d * d, d * d);
  for (Eigen::Index i = 0; i < m; ++i) {
    stacked.middleRows(i * d * d, d * d) = sylvester_operator(generators[i]);
  }
  const Matrix kernel = linalg::nullspace(stacked, tol);
  CommutantBasis out;
  out.elements.reserve(kernel.cols());
  for (Eigen::Index j = 0; j < kernel.cols(); ++j) {
    out.elements.push_back(
        Eigen::Map<const Matrix>(kernel.col(j).data(), d, d));
  }
  return out;
}

KrylovDecomposition krylov_decomposition(const std::vector<Matrix>& generators,
                                         double tol, Rng& rng) {
  check_generators(generators);
  require(generators.front().rows() <= 4096, ErrorCode::bad_argument,
          "krylov_decomposition: dimension above the supported limit");
  const CommutantBasis commutant = commutant_basis(generators, tol);
  for (int attempt = 0; attempt < kMaxDraws; ++attempt) {
    Attempt a = attempt_decomposition(generators, commutant, tol, rng);
    if (a.ok) return std::move(a.decomp);
  }
  fail(ErrorCode::degenerate_draw,
       "krylov_decomposition: random commutant draws kept producing "
       "degenerate or inconsistent eigenspaces");
}

double off_block_mass(const Matrix& op, const KrylovDecomposition& decomp) {
  require(op.rows() == decomp.dim() && op.cols() == decomp.dim(),
          ErrorCode::dimension_mismatch, "operator does not match decomposition");
  Matrix t = decomp.basis_change.adjoint() * op * decomp.basis_change;
  for (const Sector& s : decomp.sectors) {
    for (Eigen::Index p = 0; p < s.multiplicity; ++p) {
      t.block(s.col_start + p * s.irrep_dim, s.col_start + p * s.irrep_dim,
              s.irrep_dim, s.irrep_dim)
          .setZero();
    }
  }
  return t.norm();
}

double verify_block_structure(const Matrix& op,
                              const KrylovDecomposition& decomp) {
  require(op.rows() == decomp.dim() && op.cols() == decomp.dim(),
          ErrorCode::dimension_mismatch, "operator does not match decomposition");
  Matrix t = decomp.basis_change.adjoint() * op * decomp.basis_change;
  for (const Sector& s : decomp.sectors) {
    const Eigen::Index w = s.irrep_dim * s.multiplicity;
    t.block(s.col_start, s.col_start, w, w).setZero();
  }
  return t.norm();
}

Matrix project_block(const Matrix& op, const KrylovDecomposition& decomp,
                     int sector_id, double tol) {
  const double leak = off_block_mass(op, decomp);
  require(leak <= tol, ErrorCode::block_leakage,
          "project_block: operator has off-block mass " + std::to_string(leak));
  const Sector& s = decomp.sector(sector_id);
  const Matrix cols = decomp.basis_change.middleCols(s.col_start, s.irrep_dim);
  return cols.adjoint() * op * cols;
}

double copy_agreement_residual(const Matrix& op,
                               const KrylovDecomposition& decomp,
                               int sector_id) {
  const Sector& s = decomp.sector(sector_id);
  double worst = 0.0;
  Matrix first;
  for (Eigen::Index p = 0; p < s.multiplicity; ++p) {
    const Matrix cols = decomp.basis_change.middleCols(
        s.col_start + p * s.irrep_dim, s.irrep_dim);
    const Matrix block = cols.adjoint() * op * cols;
    if (p == 0) {
      first = block;
    } else {
      worst = std::max(worst, (block - first).norm());
    }
  }
  return worst;
}

KrylovDecomposition extend_with_ancilla(const KrylovDecomposition& decomp,
                                        Eigen::Index anc_dim) {
  require(anc_dim >= 1, ErrorCode::bad_argument,
          "ancilla dimension must be >= 1");
  KrylovDecomposition out;
  out.basis_change = linalg::kron(
      decomp.basis_change, Matrix::Identity(anc_dim, anc_dim));
  for (const Sector& s : decomp.sectors) {
    out.sectors.push_back(Sector{s.id, s.irrep_dim * anc_dim, s.multiplicity,
                                 s.col_start * anc_dim});
  }
  out.selected = decomp.selected;
  return out;
}

std::string to_json(const KrylovDecomposition& decomp) {
  nlohmann::json sectors = nlohmann::json::array();
  for (const Sector& s : decomp.sectors) {
    sectors.push_back({{"id", s.id},
                       {"irrep_dim", s.irrep_dim},
                       {"multiplicity", s.multiplicity}});
  }
  nlohmann::json basis = nlohmann::json::array();
  for (Eigen::Index r = 0; r < decomp.dim(); ++r) {
    for (Eigen::Index c = 0; c < decomp.dim(); ++c) {
      const cplx z = decomp.basis_change(r, c);
      basis.push_back({z.real(), z.imag()});
    }
  }
  nlohmann::json j = {{"dim", decomp.dim()},
                      {"sectors", sectors},
                      {"selected", decomp.selected},
                      {"basis_change", basis}};
  return j.dump(2);
}

}  // namespace fraglab::algebra
