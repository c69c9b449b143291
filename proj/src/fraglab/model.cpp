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

#include "fraglab/model.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

namespace fraglab::model {

namespace {

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

/// Embeds a two-site operator onto qubits (site, site+1) of an L-qubit
/// register, qubit 0 being the most significant bit.
Matrix embed_pair(const Matrix& pair_op, Eigen::Index site,
                  Eigen::Index qubits) {
  const Eigen::Index left = Eigen::Index(1) << site;
  const Eigen::Index right = Eigen::Index(1) << (qubits - site - 2);
  return linalg::kron(linalg::kron(identity(left), pair_op), identity(right));
}

Matrix embed_single(const Matrix& site_op, Eigen::Index site,
                    Eigen::Index qubits) {
  const Eigen::Index left = Eigen::Index(1) << site;
  const Eigen::Index right = Eigen::Index(1) << (qubits - site - 1);
  return linalg::kron(linalg::kron(identity(left), site_op), identity(right));
}

Vector basis_state(Eigen::Index dim, Eigen::Index index) {
  Vector v = Vector::Zero(dim);
  v(index) = 1.0;
  return v;
}

Vector bell_phi_plus() {
  Vector v = Vector::Zero(4);
  v(0) = 1.0 / std::sqrt(2.0);
  v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

Vector kron_vec(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

}  // namespace

Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Matrix pauli_y() {
  Matrix m(2, 2);
  m << cplx(0, 0), cplx(0, -1), cplx(0, 1), cplx(0, 0);
  return m;
}

Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

std::vector<Matrix> tl_generators(Eigen::Index qubits) {
  require(qubits >= 2, ErrorCode::bad_argument,
          "tl_generators: need at least two qubits");
  Matrix e = Matrix::Zero(4, 4);
  e(0, 0) = e(0, 3) = e(3, 0) = e(3, 3) = 1.0;
  std::vector<Matrix> out;
  out.reserve(qubits - 1);
  for (Eigen::Index site = 0; site + 1 < qubits; ++site) {
    out.push_back(embed_pair(e, site, qubits));
  }
  return out;
}

SystemSpec make_tl_system(Eigen::Index qubits, Eigen::Index ancillas) {
  require(ancillas >= 1, ErrorCode::bad_argument,
          "make_tl_system: need at least one ancilla qubit");
  SystemSpec spec;
  spec.qubits = qubits;
  spec.ancillas = ancillas;
  spec.generators = tl_generators(qubits);
  return spec;
}

Matrix build_hamiltonian_with_coeffs(
    const SystemSpec& spec, const std::vector<double>& system_coeffs,
    const std::vector<double>& ancilla_coeffs) {
  require(system_coeffs.size() == spec.generators.size(),
          ErrorCode::dimension_mismatch,
          "build_hamiltonian: one coefficient per generator required");
  require(ancilla_coeffs.size() ==
              static_cast<std::size_t>(3 * spec.ancillas),
          ErrorCode::dimension_mismatch,
          "build_hamiltonian: three coefficients per ancilla qubit required");
  Matrix system_part = Matrix::Zero(spec.system_dim(), spec.system_dim());
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    system_part += system_coeffs[i] * spec.generators[i];
  }
  Matrix ancilla_part = Matrix::Zero(spec.ancilla_dim(), spec.ancilla_dim());
  for (Eigen::Index j = 0; j < spec.ancillas; ++j) {
    ancilla_part += ancilla_coeffs[3 * j + 0] *
                    embed_single(pauli_x(), j, spec.ancillas);
    ancilla_part += ancilla_coeffs[3 * j + 1] *
                    embed_single(pauli_y(), j, spec.ancillas);
    ancilla_part += ancilla_coeffs[3 * j + 2] *
                    embed_single(pauli_z(), j, spec.ancillas);
  }
  return linalg::kron(system_part, ancilla_part);
}

Matrix build_hamiltonian(const SystemSpec& spec, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> cs(spec.generators.size());
  for (double& c : cs) c = gauss(rng);
  std::vector<double> ca(3 * spec.ancillas);
  for (double& c : ca) c = gauss(rng);
  return build_hamiltonian_with_coeffs(spec, cs, ca);
}

Matrix build_a(const SystemSpec& spec) {
  require(!spec.generators.empty(), ErrorCode::bad_argument,
          "build_a: system has no generators");
  const Matrix& h1 = spec.generators.front();
  const linalg::EigenSystem es = linalg::hermitian_eig(h1);
  const Matrix shifted =
      h1 - es.eigenvalues(0) * identity(spec.system_dim());
  const Matrix flip = 0.5 * (identity(2) + pauli_x());
  const Matrix ancilla_part = embed_single(flip, 0, spec.ancillas);
  return linalg::kron(shifted, ancilla_part);
}

LabelEncoding encode_labels(Eigen::Index class_count) {
  require(class_count >= 1, ErrorCode::bad_argument,
          "encode_labels: class_count must be >= 1");
  Eigen::Index bits = 0;
  while ((Eigen::Index(1) << bits) < class_count) ++bits;
  LabelEncoding enc;
  enc.ancillas = std::max<Eigen::Index>(1, bits);
  enc.labels.resize(class_count);
  for (Eigen::Index i = 0; i < class_count; ++i) {
    enc.labels[i] = static_cast<int>(i);
  }
  return enc;
}

Matrix build_observable(const DataPoint& point, Eigen::Index qubits,
                        Eigen::Index ancillas) {
  const Eigen::Index anc_dim = Eigen::Index(1) << ancillas;
  require(point.label >= 0 && point.label < anc_dim, ErrorCode::bad_argument,
          "build_observable: label does not fit the ancilla register");
  Matrix projector = Matrix::Zero(anc_dim, anc_dim);
  projector(point.label, point.label) = 1.0;
  const Eigen::Index sys_dim = Eigen::Index(1) << qubits;
  return -linalg::kron(identity(sys_dim), projector);
}

Dataset paper_dataset(Eigen::Index qubits) {
  require(qubits == 4 || qubits == 8, ErrorCode::bad_argument,
          "paper_dataset: defined for 4 or 8 qubits");
  std::vector<Vector> system_states;
  if (qubits == 4) {
    system_states.push_back(
        kron_vec(kron_vec(basis_state(2, 0), bell_phi_plus()),
                 basis_state(2, 1)));
    system_states.push_back(kron_vec(bell_phi_plus(), bell_phi_plus()));
  } else {
    // |010101> on qubits 2..7, MSB first.
    Eigen::Index tail = 0;
    for (Eigen::Index b = 0; b < 6; ++b) tail = (tail << 1) | (b % 2);
    system_states.push_back(
        kron_vec(bell_phi_plus(), basis_state(64, tail)));
  }
  const LabelEncoding enc =
      encode_labels(static_cast<Eigen::Index>(system_states.size()));
  Dataset out;
  out.qubits = qubits;
  out.ancillas = enc.ancillas;
  const Eigen::Index anc_dim = Eigen::Index(1) << enc.ancillas;
  for (std::size_t i = 0; i < system_states.size(); ++i) {
    DataPoint p;
    p.state = kron_vec(system_states[i].normalized(),
                       basis_state(anc_dim, 0));
    p.label = enc.labels[i];
    out.points.push_back(std::move(p));
  }
  return out;
}

void tag_sectors(Dataset& dataset,
                 const algebra::KrylovDecomposition& decomp) {
  const Eigen::Index sys_dim = Eigen::Index(1) << dataset.qubits;
  const Eigen::Index anc_dim = Eigen::Index(1) << dataset.ancillas;
  require(decomp.dim() == sys_dim, ErrorCode::dimension_mismatch,
          "tag_sectors: decomposition does not match the system dimension");
  for (DataPoint& p : dataset.points) {
    // The ancilla register starts in |0...0>, so the system part is the
    // stride-anc_dim slice of the state.
    Vector sys(sys_dim);
    for (Eigen::Index i = 0; i < sys_dim; ++i) sys(i) = p.state(i * anc_dim);
    const Vector rotated = decomp.basis_change.adjoint() * sys;
    int found = -1;
    for (const algebra::Sector& s : decomp.sectors) {
      const double mass =
          rotated.segment(s.col_start, s.irrep_dim * s.multiplicity)
              .squaredNorm();
      if (mass > 1.0 - 1e-8) {
        found = s.id;
        break;
      }
    }
    require(found >= 0, ErrorCode::sector_resolution_failure,
            "tag_sectors: state is not supported on a single sector");
    p.sector = found;
  }
}

std::string label_bits(int label, Eigen::Index ancillas) {
  std::string bits(ancillas, '0');
  for (Eigen::Index b = 0; b < ancillas; ++b) {
    if ((label >> (ancillas - 1 - b)) & 1) bits[b] = '1';
  }
  return bits;
}

std::string to_json(const Dataset& dataset) {
  nlohmann::json points = nlohmann::json::array();
  for (const DataPoint& p : dataset.points) {
    nlohmann::json amplitudes = nlohmann::json::array();
    for (Eigen::Index i = 0; i < p.state.size(); ++i) {
      amplitudes.push_back({p.state(i).real(), p.state(i).imag()});
    }
    points.push_back({{"amplitudes", amplitudes},
                      {"label", label_bits(p.label, dataset.ancillas)},
                      {"sector", p.sector}});
  }
  nlohmann::json j = {{"L", dataset.qubits},
                      {"n_a", dataset.ancillas},
                      {"points", points}};
  return j.dump(2);
}

Dataset dataset_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Dataset out;
  out.qubits = j.at("L").get<Eigen::Index>();
  out.ancillas = j.at("n_a").get<Eigen::Index>();
  const Eigen::Index dim =
      (Eigen::Index(1) << out.qubits) * (Eigen::Index(1) << out.ancillas);
  for (const auto& jp : j.at("points")) {
    DataPoint p;
    const auto& amps = jp.at("amplitudes");
    require(static_cast<Eigen::Index>(amps.size()) == dim,
            ErrorCode::dimension_mismatch,
            "dataset_from_json: amplitude count does not match L and n_a");
    p.state.resize(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      p.state(i) = cplx(amps[i][0].get<double>(), amps[i][1].get<double>());
    }
    const std::string bits = jp.at("label").get<std::string>();
    require(bits.size() == static_cast<std::size_t>(out.ancillas),
            ErrorCode::bad_argument, "dataset_from_json: label width mismatch");
    int label = 0;
    for (char c : bits) {
      require(c == '0' || c == '1', ErrorCode::bad_argument,
              "dataset_from_json: label must be a bitstring");
      label = (label << 1) | (c - '0');
    }
    p.label = label;
    p.sector = jp.value("sector", -1);
    out.points.push_back(std::move(p));
  }
  return out;
}

}  // namespace fraglab::model
