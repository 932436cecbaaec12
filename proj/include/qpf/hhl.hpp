// Copyright 2026 The qpf Authors
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

// HHL linear-system solver on a simulated register layout
//
//   qubits [0, beta)                 solution register (amplitude-encoded p)
//   qubits [beta, beta + alpha)      clock register, clock bit k on beta + k
//   qubit  beta + alpha              ancilla
//
// The pipeline is state preparation -> phase estimation of e^{iBt} ->
// reciprocal-eigenvalue rotation of the ancilla -> inverse phase estimation
// -> post-selection of ancilla = 1 -> projection of the clock onto |0>.

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "qpf/errors.hpp"
#include "qpf/grid.hpp"
#include "qpf/qsim.hpp"

namespace qpf::hhl {

struct EigenDecomposition {
  Eigen::VectorXd lambdas;  // ascending
  Eigen::MatrixXd vectors;  // orthonormal columns

  Eigen::Index size() const { return lambdas.size(); }
};

/// Symmetric eigendecomposition; throws NumericalError unless every
/// eigenvalue is strictly positive.
EigenDecomposition decompose(const Eigen::MatrixXd& b);

struct SpectralScaling {
  double t = 0.0;  // evolution time
  int alpha = 0;   // clock bits
  double c = 0.0;  // reciprocal-rotation constant

  /// Eigenvalue represented by clock integer m.
  double clock_eigenvalue(std::uint64_t m) const {
    return 2.0 * M_PI * static_cast<double>(m) / (std::ldexp(1.0, alpha) * t);
  }
  /// Position of lambda on the clock grid (exact integer when representable).
  double clock_position(double lambda) const {
    return lambda * t / (2.0 * M_PI) * std::ldexp(1.0, alpha);
  }
};

/// Maps the largest eigenvalue onto clock integer 2^alpha - 1 and sets c to
/// the eigenvalue of clock integer 1.
SpectralScaling choose_scaling(const EigenDecomposition& eig, int alpha);

struct RegisterLayout {
  int beta = 0;
  int alpha = 0;

  int width() const { return beta + alpha + 1; }
  int ancilla() const { return beta + alpha; }
  qsim::Qubit clock(int k) const { return beta + k; }
  std::vector<qsim::Qubit> solution_qubits() const;
  std::vector<qsim::Qubit> clock_qubits() const;
};

/// Inverse quantum Fourier transform on `qubits` (qubits[0] least
/// significant) inside a circuit of width `width`.
qsim::Circuit inverse_qft(int width, const std::vector<qsim::Qubit>& qubits);

/// e^{i B tau} computed from the eigendecomposition.
Eigen::MatrixXcd evolution(const EigenDecomposition& eig, double tau);

/// Phase estimation of e^{iBt}: Hadamards on the clock, controlled
/// e^{iBt 2^k} from clock bit k, inverse QFT on the clock.
qsim::Circuit build_qpe(const EigenDecomposition& eig, const SpectralScaling& scaling,
                        const RegisterLayout& layout);

/// Uniformly controlled Ry on the ancilla with angle 2 asin(c / lambda(m))
/// for clock integer m >= 1 and 0 for m = 0.
qsim::UniformlyControlledRy build_reciprocal_rotation(const SpectralScaling& scaling,
                                                       const RegisterLayout& layout);

struct HHLConfig {
  int alpha = 5;
  std::optional<double> t_override;
  std::optional<double> c_override;
  // Lowering for metrics can be skipped when only the state is wanted.
  bool compute_metrics = true;
};

struct HHLResult {
  Eigen::VectorXd solution_unit;
  double success_probability = 0.0;
  double recovered_norm = 0.0;
  double fidelity = 0.0;
  double residual_clock_leak = 0.0;
  qsim::CircuitMetrics metrics;
  SpectralScaling scaling;
  HHLConfig config;
};

/// The full HHL circuit for a (padded) system, with its layout and scaling.
struct HHLCircuit {
  qsim::Circuit circuit;
  RegisterLayout layout;
  SpectralScaling scaling;
  EigenDecomposition eig;
  Eigen::VectorXd p_unit;  // padded, normalized right-hand side
  double p_norm = 0.0;
};

HHLCircuit build_hhl_circuit(const Eigen::MatrixXd& b, const Eigen::VectorXd& p,
                             const HHLConfig& config);

/// Runs HHL on B x = p. `reference` is the classical solution used for the
/// fidelity score.
HHLResult run_hhl(const Eigen::MatrixXd& b, const Eigen::VectorXd& p,
                  const Eigen::VectorXd& reference, const HHLConfig& config = {});

/// Convenience overload scoring against grid::solve_dc.
HHLResult run_hhl(const grid::ReducedSystem& sys, const HHLConfig& config = {});

/// Squared overlap of the unit-normalized vectors, in [0, 1].
template <typename DerivedA, typename DerivedB>
double fidelity(const Eigen::MatrixBase<DerivedA>& reference,
                const Eigen::MatrixBase<DerivedB>& candidate) {
  const double na = reference.norm();
  const double nb = candidate.norm();
  if (!(na > 0.0) || !(nb > 0.0)) {
    throw InvalidInput("fidelity of a zero vector");
  }
  if (reference.size() != candidate.size()) {
    throw InvalidInput("fidelity of vectors with different lengths");
  }
  const double overlap = reference.dot(candidate) / (na * nb);
  return std::min(1.0, overlap * overlap);
}

/// Additive state error sqrt(2 (1 - sqrt(f))) implied by fidelity f.
double epsilon_from_fidelity(double f);

}  // namespace qpf::hhl
