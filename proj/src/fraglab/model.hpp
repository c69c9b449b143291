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

namespace fraglab::model {

/// A fragmented system: local Hermitian generators on L qubits plus an
/// ancilla register of n_a qubits used for writing class labels.
struct SystemSpec {
  Eigen::Index qubits = 0;       // L
  Eigen::Index ancillas = 1;     // n_a >= 1
  std::vector<Matrix> generators;  // Hermitian, on dimension 2^L

  Eigen::Index system_dim() const { return Eigen::Index(1) << qubits; }
  Eigen::Index ancilla_dim() const { return Eigen::Index(1) << ancillas; }
  Eigen::Index total_dim() const { return system_dim() * ancilla_dim(); }
};

struct DataPoint {
  Vector state;    // on 2^(L + n_a); system part tensored with |0...0>
  int label = 0;   // ancilla bitstring read as an integer, MSB first
  int sector = -1; // -1 until resolved against a decomposition
};

struct Dataset {
  Eigen::Index qubits = 0;
  Eigen::Index ancillas = 1;
  std::vector<DataPoint> points;

  Eigen::Index size() const { return static_cast<Eigen::Index>(points.size()); }
};

/// The L-1 adjacent-pair projector generators of the open chain. Each acts
/// on qubits (i, i+1) as the rank-one matrix with unit entries at
/// (00,00), (00,11), (11,00), (11,11) and as the identity elsewhere.
std::vector<Matrix> tl_generators(Eigen::Index qubits);

SystemSpec make_tl_system(Eigen::Index qubits, Eigen::Index ancillas);

/// Random Hamiltonian (sum_i c_i h_i) tensor (sum_j c'_{j,x} sx_j +
/// c'_{j,y} sy_j + c'_{j,z} sz_j) with all coefficients i.i.d. standard
/// normal. Draw order: system coefficients first, then per ancilla qubit
/// the x, y, z coefficients.
Matrix build_hamiltonian(const SystemSpec& spec, Rng& rng);

/// Deterministic variant used by tests and by build_hamiltonian itself.
Matrix build_hamiltonian_with_coeffs(const SystemSpec& spec,
                                     const std::vector<double>& system_coeffs,
                                     const std::vector<double>& ancilla_coeffs);

/// Default parameterized-rotation generator:
/// (h_1 - lambda_min(h_1) I) tensor (I + sx on ancilla qubit 1)/2.
/// Positive semidefinite and block-diagonal in the system decomposition.
Matrix build_a(const SystemSpec& spec);

struct LabelEncoding {
  Eigen::Index ancillas;    // max(1, ceil(log2 class_count))
  std::vector<int> labels;  // consecutive integers starting at 0
};
LabelEncoding encode_labels(Eigen::Index class_count);

/// O_x = -(system identity) tensor |label><label| on the ancilla register.
Matrix build_observable(const DataPoint& point, Eigen::Index qubits,
                        Eigen::Index ancillas);

/// The two reference datasets: for 4 qubits {|0> Phi+ |1>, Phi+ Phi+} and
/// for 8 qubits {Phi+ |010101>}, ancilla appended in |0...0>, labels
/// assigned in enumeration order.
Dataset paper_dataset(Eigen::Index qubits);

/// Resolves each point's sector by projecting its system part onto the
/// decomposition; throws ErrorCode::sector_resolution_failure if a point is
/// not supported on a single sector within 1e-8.
void tag_sectors(Dataset& dataset, const algebra::KrylovDecomposition& decomp);

std::string to_json(const Dataset& dataset);
Dataset dataset_from_json(const std::string& text);

std::string label_bits(int label, Eigen::Index ancillas);

Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();

}  // namespace fraglab::model
