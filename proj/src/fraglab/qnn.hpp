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
#include "fraglab/linalg.hpp"
#include "fraglab/model.hpp"

namespace fraglab::qnn {

/// The randomized ansatz
///   U(theta) = e^{iHt''} (prod_{i=1..p} e^{-iHt_i} e^{iA theta_i} e^{iHt_i})
///              e^{-iHt'}
/// with factor i = 1 leftmost inside the product. Times are sampled once
/// and then frozen; only theta changes during training.
struct AnsatzSpec {
  Eigen::Index p = 0;
  double horizon = 0.0;  // T; all times lie in [0, T]
  std::vector<double> times;
  double t_prime = 0.0;
  double t_double_prime = 0.0;
  std::uint64_t seed = 0;  // provenance only; 0 when sampled from a live rng
  Matrix hamiltonian;
  Matrix generator_a;
  linalg::EigenSystem ham_eig;
  linalg::EigenSystem a_eig;

  Eigen::Index dim() const { return hamiltonian.rows(); }
};

/// Samples t_1..t_p, then t', then t'' i.i.d. uniform on [0, T].
AnsatzSpec sample_ansatz(Eigen::Index p, double horizon, Matrix hamiltonian,
                         Matrix generator_a, Rng& rng);

/// Builds the spec from explicit times (test hook and JSON import path).
AnsatzSpec make_ansatz(std::vector<double> times, double t_prime,
                       double t_double_prime, double horizon,
                       Matrix hamiltonian, Matrix generator_a);

Matrix build_unitary(const AnsatzSpec& spec, const RealVector& theta);

double adjusted_loss(double loss_value);

struct Evaluation {
  double loss = 0.0;
  RealVector gradient;
};

/// Binds an ansatz to a dataset and caches every theta-independent
/// conjugation (the dressed generators, dressed observables and evolved
/// states), so gradient-descent epochs pay only for the theta-dependent
/// prefix products. All methods are const and safe to call concurrently.
class Engine {
 public:
  Engine(const AnsatzSpec& spec, const model::Dataset& dataset);

  double loss(const RealVector& theta) const;
  std::vector<double> per_point_losses(const RealVector& theta) const;
  Evaluation evaluate(const RealVector& theta) const;
  RealVector gradient(const RealVector& theta) const;
  RealMatrix hessian(const RealVector& theta) const;

  Eigen::Index parameter_count() const { return spec_->p; }

 private:
  struct Dressed {
    std::vector<Matrix> a_rotated;  // e^{-iHt_i} A e^{iHt_i}
    std::vector<Matrix> obs_rotated;  // e^{-iHt'} O_x e^{iHt'} per point
    std::vector<Vector> states;       // e^{-iHt''} |x> per point
  };
  struct ThetaFrame {
    std::vector<Matrix> a_conjugated;  // A~_i = V_i B_i V_i^dagger
    Matrix suffix;                     // V_p
  };
  ThetaFrame frame(const RealVector& theta) const;

  const AnsatzSpec* spec_;
  Dressed dressed_;
};

double loss(const AnsatzSpec& spec, const RealVector& theta,
            const model::Dataset& dataset);
std::vector<double> per_point_losses(const AnsatzSpec& spec,
                                     const RealVector& theta,
                                     const model::Dataset& dataset);
RealVector gradient(const AnsatzSpec& spec, const RealVector& theta,
                    const model::Dataset& dataset);
RealMatrix hessian(const AnsatzSpec& spec, const RealVector& theta,
                   const model::Dataset& dataset);

/// Independent block-basis route: per-sector loss sums evaluated inside the
/// decomposed subspaces. Keys are sector ids of `decomp`, which must be the
/// system decomposition extended by the ancilla register.
std::vector<std::pair<int, double>> sector_losses(
    const AnsatzSpec& spec, const RealVector& theta,
    const model::Dataset& dataset, const algebra::KrylovDecomposition& decomp);

std::string to_json(const AnsatzSpec& spec);

}  // namespace fraglab::qnn
