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

#include "fraglab/theory.hpp"

#include <cmath>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "fraglab/threading.hpp"

namespace fraglab::theory {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr Eigen::Index kSampleBlock = 1024;

double trace_re(const Matrix& m) { return m.trace().real(); }

/// Householder-style orthonormal completion: columns 1..n-1 of a unitary
/// whose first column is w.
Matrix orthonormal_completion(const Vector& w) {
  const Eigen::Index n = w.size();
  Matrix u = Matrix::Identity(n, n);
  if (n == 1) return u.rightCols(0);
  Vector v = w;
  const double alpha = std::abs(v(0));
  const cplx phase = alpha > 1e-14 ? v(0) / alpha : cplx(1.0, 0.0);
  v(0) += phase;
  const double vnorm2 = v.squaredNorm();
  // H = phase * (I - 2 v v^dag / |v|^2) maps e_0 to -w; columns 1.. are an
  // orthonormal completion of w up to sign, which is all callers need.
  u -= (2.0 / vnorm2) * (v * v.adjoint());
  return u.rightCols(n - 1);
}

struct Accumulator {
  double sum = 0.0;
  double sum_sq = 0.0;
  Eigen::Index n = 0;

  Accumulator operator+(const Accumulator& o) const {
    return Accumulator{sum + o.sum, sum_sq + o.sum_sq, n + o.n};
  }
  double mean() const { return n > 0 ? sum / double(n) : 0.0; }
  double stderr_of_mean() const {
    if (n < 2) return 0.0;
    const double m = mean();
    const double var = std::max(0.0, sum_sq / double(n) - m * m);
    return std::sqrt(var / double(n));
  }
};

}  // namespace

SemiIsotropic semi_isotropic(const Matrix& a_block) {
  require(linalg::is_hermitian(a_block), ErrorCode::not_hermitian,
          "semi_isotropic: block must be Hermitian");
  const double trace = trace_re(a_block);
  const double trace_sq = trace_re(a_block * a_block);
  require(trace_sq > 1e-24, ErrorCode::zero_operator,
          "semi_isotropic: block is numerically zero");
  SemiIsotropic out;
  out.r_exact = trace * trace / trace_sq;
  const double rounded = std::round(out.r_exact);
  out.r_used = std::abs(out.r_exact - rounded) < 1e-9
                   ? static_cast<Eigen::Index>(rounded)
                   : static_cast<Eigen::Index>(std::ceil(out.r_exact));
  const double value = trace / static_cast<double>(out.r_used);

  // Projectors onto the leading eigenvectors, eigenvalues non-increasing.
  const linalg::EigenSystem es = linalg::hermitian_eig(a_block);
  const Eigen::Index n = a_block.rows();
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k < out.r_used && k < n; ++k) {
    const Vector v = es.eigenvectors.col(n - 1 - k);
    m += value * (v * v.adjoint());
  }
  out.matrix = std::move(m);
  out.trace_residual = std::abs(trace_re(out.matrix) - trace);
  out.second_moment_residual =
      std::abs(trace_re(out.matrix * out.matrix) - trace_sq);
  return out;
}

Eigen::Index GaussianModelSpec::total_points() const {
  Eigen::Index m = 0;
  for (const GaussianSector& s : sectors) m += s.points();
  return m;
}

GaussianSector make_flat_sector(Eigen::Index irrep_dim,
                                Eigen::Index ancilla_dim, double a_value,
                                Eigen::Index a_rank, Eigen::Index points) {
  require(irrep_dim >= 1 && ancilla_dim >= 2, ErrorCode::bad_argument,
          "make_flat_sector: need N_lambda >= 1 and N_a >= 2");
  require(points >= 1 && points <= irrep_dim && points <= ancilla_dim,
          ErrorCode::bad_argument,
          "make_flat_sector: points must fit both registers");
  GaussianSector s;
  s.irrep_dim = irrep_dim;
  s.ancilla_dim = ancilla_dim;
  const Eigen::Index star = irrep_dim * ancilla_dim;
  require(a_rank >= 1 && a_rank <= star, ErrorCode::bad_argument,
          "make_flat_sector: invalid A rank");
  s.a_block = Matrix::Zero(star, star);
  for (Eigen::Index k = 0; k < a_rank; ++k) s.a_block(k, k) = a_value;
  for (Eigen::Index x = 0; x < points; ++x) {
    Vector state = Vector::Zero(star);
    state(x * ancilla_dim) = 1.0;  // |q = x> tensor |0>
    s.states.push_back(std::move(state));
    Matrix proj = Matrix::Zero(ancilla_dim, ancilla_dim);
    proj(x, x) = 1.0;  // label x
    s.observables.push_back(
        -linalg::kron(Matrix::Identity(irrep_dim, irrep_dim), proj));
  }
  return s;
}

GradientStatSamples sample_gradient_stat(const GaussianModelSpec& model,
                                         Eigen::Index component_count,
                                         Eigen::Index sample_count,
                                         std::uint64_t seed, int threads) {
  require(component_count >= 1 && sample_count >= 1, ErrorCode::bad_argument,
          "sample_gradient_stat: need at least one component and one sample");
  const Eigen::Index m = model.total_points();
  require(m >= 1, ErrorCode::bad_argument,
          "sample_gradient_stat: model has no datapoints");

  GradientStatSamples out;
  for (std::size_t s = 0; s < model.sectors.size(); ++s) {
    for (Eigen::Index x = 0; x < model.sectors[s].points(); ++x) {
      for (Eigen::Index i = 0; i < component_count; ++i) {
        out.keys.push_back({static_cast<int>(s), x, i});
      }
    }
  }
  out.samples.assign(sample_count,
                     std::vector<double>(out.keys.size(), 0.0));

  std::vector<Matrix> a_iso;
  for (const GaussianSector& s : model.sectors) {
    a_iso.push_back(semi_isotropic(s.a_block).matrix);
  }

  const Eigen::Index blocks =
      (sample_count + kSampleBlock - 1) / kSampleBlock;
  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    Rng rng = make_rng(stable_hash(seed, b));
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * kSampleBlock;
    const Eigen::Index end =
        std::min(sample_count, begin + kSampleBlock);
    for (Eigen::Index s = begin; s < end; ++s) {
      std::size_t col = 0;
      for (std::size_t sec = 0; sec < model.sectors.size(); ++sec) {
        const GaussianSector& sector = model.sectors[sec];
        const Eigen::Index star = sector.star_dim();
        const double prefactor =
            1.0 / (static_cast<double>(m) * static_cast<double>(star) *
                   static_cast<double>(star));
        const Matrix g2 = linalg::haar_unitary(star, rng);
        const Matrix gp = linalg::ginibre(star, star, rng);
        std::vector<Matrix> gi;
        gi.reserve(component_count);
        for (Eigen::Index i = 0; i < component_count; ++i) {
          gi.push_back(linalg::ginibre(star, star, rng));
        }
        for (Eigen::Index x = 0; x < sector.points(); ++x) {
          const Vector w = g2 * sector.states[x];
          const Vector o_w =
              gp * (sector.observables[x] * (gp.adjoint() * w));
          for (Eigen::Index i = 0; i < component_count; ++i) {
            const Vector a_w = gi[i] * (a_iso[sec] * (gi[i].adjoint() * w));
            // i <w| [F_A, F_O] |w>  =  -2 Im <F_A w, F_O w>.
            out.samples[s][col++] = -2.0 * prefactor * a_w.dot(o_w).imag();
          }
        }
      }
    }
  });
  return out;
}

double component_second_moment(const GaussianSector& sector, Eigen::Index m) {
  const double na = static_cast<double>(sector.ancilla_dim);
  const double nl = static_cast<double>(sector.irrep_dim);
  const double tr_a_sq = trace_re(sector.a_block * sector.a_block);
  return 2.0 * (na - 1.0) * tr_a_sq /
         (static_cast<double>(m) * static_cast<double>(m) * na * na * na *
          na * nl * nl);
}

double variance_formula(const GaussianModelSpec& model, Eigen::Index p) {
  require(p >= 0, ErrorCode::bad_argument, "variance_formula: p must be >= 0");
  const Eigen::Index m = model.total_points();
  double total = 0.0;
  for (const GaussianSector& s : model.sectors) {
    total += static_cast<double>(s.points()) *
             component_second_moment(s, m) * static_cast<double>(p);
  }
  return total;
}

MomentComparison moment_compare(const Matrix& hamiltonian, const Matrix& a_op,
                                const Matrix& o_op, const Vector& x_state,
                                double horizon, int order,
                                Eigen::Index sample_count, std::uint64_t seed,
                                int threads) {
  require(order == 1 || order == 2, ErrorCode::bad_argument,
          "moment_compare: order must be 1 or 2");
  require(horizon > 0.0, ErrorCode::bad_argument,
          "moment_compare: horizon must be > 0");
  const Eigen::Index dim = hamiltonian.rows();
  require(a_op.rows() == dim && o_op.rows() == dim && x_state.size() == dim,
          ErrorCode::dimension_mismatch, "moment_compare: dimension mismatch");
  const linalg::EigenSystem ham = linalg::hermitian_eig(hamiltonian);

  const Eigen::Index blocks =
      (sample_count + kSampleBlock - 1) / kSampleBlock;
  std::vector<Accumulator> time_re(blocks), time_im(blocks);
  std::vector<Accumulator> haar_re(blocks), haar_im(blocks);

  parallel_for(static_cast<std::size_t>(blocks), threads, [&](std::size_t b) {
    Rng rng = make_rng(stable_hash(seed, b));
    std::uniform_real_distribution<double> uniform(0.0, horizon);
    const Eigen::Index begin = static_cast<Eigen::Index>(b) * kSampleBlock;
    const Eigen::Index end = std::min(sample_count, begin + kSampleBlock);
    for (Eigen::Index s = begin; s < end; ++s) {
      // Time side: Tr(rho(t'') A(t) O(t')), and for order 2 the product
      // with the swapped ordering Tr(rho(t'') O(t') A(t)).
      const double t = uniform(rng);
      const double tp = uniform(rng);
      const double tpp = uniform(rng);
      const Vector psi = linalg::evolve_apply(ham, tpp, -1, x_state);
      auto conj_apply = [&](const Matrix& op, double when, const Vector& v) {
        return linalg::evolve_apply(
            ham, when, -1, op * linalg::evolve_apply(ham, when, +1, v));
      };
      const Vector o_psi = conj_apply(o_op, tp, psi);
      const Vector a_psi = conj_apply(a_op, t, psi);
      const cplx trace1 = psi.dot(conj_apply(a_op, t, o_psi));
      cplx value = trace1;
      if (order == 2) value *= psi.dot(conj_apply(o_op, tp, a_psi));
      time_re[b].sum += value.real();
      time_re[b].sum_sq += value.real() * value.real();
      time_im[b].sum += value.imag();
      time_im[b].sum_sq += value.imag() * value.imag();
      ++time_re[b].n;
      ++time_im[b].n;

      // Haar side: the same trace with each evolution replaced by an
      // independent Haar unitary.
      const Matrix g = linalg::haar_unitary(dim, rng);
      const Matrix gp = linalg::haar_unitary(dim, rng);
      const Matrix gpp = linalg::haar_unitary(dim, rng);
      const Vector phi = gpp * x_state;
      const Vector o_phi = gp * (o_op * (gp.adjoint() * phi));
      const cplx htrace1 = phi.dot(g * (a_op * (g.adjoint() * o_phi)));
      cplx hvalue = htrace1;
      if (order == 2) {
        const Vector a_phi = g * (a_op * (g.adjoint() * phi));
        hvalue *= phi.dot(gp * (o_op * (gp.adjoint() * a_phi)));
      }
      haar_re[b].sum += hvalue.real();
      haar_re[b].sum_sq += hvalue.real() * hvalue.real();
      haar_im[b].sum += hvalue.imag();
      haar_im[b].sum_sq += hvalue.imag() * hvalue.imag();
      ++haar_re[b].n;
      ++haar_im[b].n;
    }
  });

  auto reduce = [](std::vector<Accumulator> re, std::vector<Accumulator> im) {
    const Accumulator r = pairwise_sum(std::move(re), Accumulator{});
    const Accumulator i = pairwise_sum(std::move(im), Accumulator{});
    MomentEstimate est;
    est.mean = cplx(r.mean(), i.mean());
    est.stderr_re = r.stderr_of_mean();
    est.stderr_im = i.stderr_of_mean();
    est.samples = r.n;
    return est;
  };

  MomentComparison out;
  out.time_avg = reduce(std::move(time_re), std::move(time_im));
  out.haar_avg = reduce(std::move(haar_re), std::move(haar_im));
  const double star = static_cast<double>(dim);
  out.closed_form = a_op.trace() * o_op.trace() / (star * star);
  out.diff = std::abs(out.time_avg.mean - out.haar_avg.mean);
  return out;
}

model::Dataset extend_dataset_multiplicities(
    const model::Dataset& dataset,
    const algebra::KrylovDecomposition& decomp) {
  const Eigen::Index sys_dim = Eigen::Index(1) << dataset.qubits;
  const Eigen::Index anc_dim = Eigen::Index(1) << dataset.ancillas;
  require(decomp.dim() == sys_dim, ErrorCode::dimension_mismatch,
          "extend_dataset_multiplicities: decomposition dimension mismatch");
  model::Dataset out = dataset;
  for (const model::DataPoint& point : dataset.points) {
    Vector sys(sys_dim);
    for (Eigen::Index i = 0; i < sys_dim; ++i) {
      sys(i) = point.state(i * anc_dim);
    }
    const Vector rotated = decomp.basis_change.adjoint() * sys;

    const algebra::Sector* home = nullptr;
    for (const algebra::Sector& s : decomp.sectors) {
      const double mass =
          rotated.segment(s.col_start, s.irrep_dim * s.multiplicity)
              .squaredNorm();
      if (mass > 1.0 - 1e-8) {
        home = &s;
        break;
      }
    }
    require(home != nullptr, ErrorCode::sector_resolution_failure,
            "extend_dataset_multiplicities: state spreads across sectors");

    // Copy-major layout: reshape the sector coefficients into a
    // multiplicity x irrep matrix and require it to be a single ray.
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic,
                                   Eigen::RowMajor>>
        coeffs(rotated.data() + home->col_start, home->multiplicity,
               home->irrep_dim);
    if (home->multiplicity == 1) continue;  // nothing to shift
    Eigen::JacobiSVD<Matrix> svd(coeffs,
                                 Eigen::ComputeFullU | Eigen::ComputeFullV);
    require(svd.singularValues()(1) < 1e-8,
            ErrorCode::sector_resolution_failure,
            "extend_dataset_multiplicities: state is not a single Schur ray");
    const Vector mult_vec = svd.matrixU().col(0);
    const Vector irrep_vec = svd.matrixV().col(0);  // conj already folded in

    const Matrix completion = orthonormal_completion(mult_vec);
    for (Eigen::Index c = 0; c < completion.cols(); ++c) {
      Vector shifted = Vector::Zero(sys_dim);
      for (Eigen::Index pp = 0; pp < home->multiplicity; ++pp) {
        for (Eigen::Index q = 0; q < home->irrep_dim; ++q) {
          shifted(home->col_start + pp * home->irrep_dim + q) =
              completion(pp, c) * std::conj(irrep_vec(q));
        }
      }
      const Vector sys_new = decomp.basis_change * shifted;
      model::DataPoint np;
      np.state = Vector::Zero(sys_dim * anc_dim);
      for (Eigen::Index i = 0; i < sys_dim; ++i) {
        np.state(i * anc_dim) = sys_new(i);
      }
      np.label = point.label;
      np.sector = point.sector;
      out.points.push_back(std::move(np));
    }
  }
  return out;
}

RankCurve hessian_rank_curve(const model::SystemSpec& system,
                             const model::Dataset& dataset,
                             const std::vector<Eigen::Index>& p_values,
                             double tol, std::uint64_t seed,
                             const algebra::KrylovDecomposition* decomp,
                             double horizon) {
  for (std::size_t i = 1; i < p_values.size(); ++i) {
    require(p_values[i - 1] < p_values[i], ErrorCode::bad_argument,
            "hessian_rank_curve: p values must be ascending");
  }
  const double t_horizon =
      horizon > 0.0
          ? horizon
          : 10.0 * static_cast<double>(system.qubits + system.ancillas);
  const Matrix generator_a = model::build_a(system);
  RankCurve out;
  for (Eigen::Index p : p_values) {
    Rng rng = make_rng(stable_hash(seed, static_cast<std::uint64_t>(p)));
    const Matrix hamiltonian = model::build_hamiltonian(system, rng);
    const qnn::AnsatzSpec spec =
        qnn::sample_ansatz(p, t_horizon, hamiltonian, generator_a, rng);
    std::uniform_real_distribution<double> angle(0.0, kTwoPi);
    RealVector theta(p);
    for (Eigen::Index i = 0; i < p; ++i) theta(i) = angle(rng);
    const RealMatrix hess = qnn::hessian(spec, theta, dataset);
    out.points.push_back(
        RankPoint{p, linalg::numerical_rank(hess.cast<cplx>(), tol)});
  }
  if (decomp != nullptr) {
    Eigen::Index n = 0;
    for (int id : decomp->selected) n += decomp->sector(id).irrep_dim;
    const Eigen::Index na = system.ancilla_dim();
    out.paper_bound = 2 * dataset.size() * na * na * na * n * n * n;
  }
  return out;
}

std::string verification_report_json(const std::string& name,
                                     double formula_value, double mc_estimate,
                                     double stderr_value,
                                     Eigen::Index samples, bool pass) {
  nlohmann::json j = {{"name", name},
                      {"formula_value", formula_value},
                      {"mc_estimate", mc_estimate},
                      {"stderr", stderr_value},
                      {"samples", samples},
                      {"pass", pass}};
  return j.dump(2);
}

}  // namespace fraglab::theory
