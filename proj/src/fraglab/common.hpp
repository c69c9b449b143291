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

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace fraglab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;
using Rng = std::mt19937_64;

/// Failure categories carried by every fraglab exception. The numeric
/// grouping mirrors the process exit codes of the CLI: bad_argument and
/// dimension_mismatch are usage errors, everything else is a numerical
/// failure.
enum class ErrorCode {
  bad_argument,
  dimension_mismatch,
  not_hermitian,
  degenerate_draw,
  block_leakage,
  sector_resolution_failure,
  zero_operator,
  non_finite_loss,
  numerical_failure,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

inline void require(bool cond, ErrorCode code, const std::string& what) {
  if (!cond) fail(code, what);
}

/// splitmix64 finalizer; the building block of all derived seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stable combination of a base seed with stream labels. Used to derive
/// per-trial and per-block RNG streams that do not depend on worker count
/// or platform.
inline std::uint64_t stable_hash(std::uint64_t a, std::uint64_t b,
                                 std::uint64_t c = 0) {
  return mix64(mix64(mix64(a) ^ b) ^ c);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace fraglab
