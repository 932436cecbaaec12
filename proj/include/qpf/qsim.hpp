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

// Dense statevector simulation over a small gate set.
//
// Endianness: qubit q is bit q of the basis-state index, so qubit 0 is the
// least significant bit. Every multi-qubit object follows the same rule:
// in ControlledUnitary, targets[0] is the least significant bit of the local
// matrix index and controls[i] is bit i of control_pattern; in
// UniformlyControlledRy, controls[i] is bit i of the angle index.

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qpf::qsim {

using Complex = std::complex<double>;
using Qubit = int;

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-9;

struct SingleQubit {
  Qubit target = 0;
  Eigen::Matrix2cd u;
};

struct Cnot {
  Qubit control = 0;
  Qubit target = 0;
};

/// Applies u to `targets` when the control qubits read control_pattern.
struct ControlledUnitary {
  std::vector<Qubit> controls;
  std::uint64_t control_pattern = 0;
  std::vector<Qubit> targets;
  Eigen::MatrixXcd u;
};

/// Ry(angles[c]) on target, where c is the integer read from controls.
struct UniformlyControlledRy {
  std::vector<Qubit> controls;
  Qubit target = 0;
  std::vector<double> angles;
};

using Gate = std::variant<SingleQubit, Cnot, ControlledUnitary, UniformlyControlledRy>;

std::vector<Qubit> qubits_of(const Gate& gate);
Gate adjoint(const Gate& gate);

// Standard single-qubit matrices.
Eigen::Matrix2cd hadamard();
Eigen::Matrix2cd pauli_x();
Eigen::Matrix2cd ry(double theta);  // [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
Eigen::Matrix2cd rz(double theta);  // diag(e^{-i t/2}, e^{i t/2})
Eigen::Matrix2cd phase(double phi);  // diag(1, e^{i phi})

template <typename Derived>
bool is_unitary(const Eigen::MatrixBase<Derived>& u, double tol = kUnitaryTolerance) {
  if (u.rows() != u.cols()) {
    return false;
  }
  const auto id = Eigen::MatrixXcd::Identity(u.rows(), u.cols());
  return ((u.adjoint() * u).eval() - id).cwiseAbs().maxCoeff() <= tol;
}

class Circuit {
 public:
  explicit Circuit(int num_qubits);

  int num_qubits() const { return num_qubits_; }
  const std::vector<Gate>& gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  /// Validates and appends; throws InvalidInput on a malformed gate.
  Circuit& add(Gate gate);
  Circuit& append(const Circuit& other);
  /// Appends `other` with its qubit q relabelled to qubit_map[q].
  Circuit& append(const Circuit& other, std::span<const Qubit> qubit_map);

  Circuit inverse() const;

 private:
  int num_qubits_;
  std::vector<Gate> gates_;
};

class StateVector {
 public:
  /// |0...0> on num_qubits qubits.
  explicit StateVector(int num_qubits);
  /// Takes ownership of amplitudes; size must be a power of two and the norm
  /// within kNormTolerance of 1.
  explicit StateVector(Eigen::VectorXcd amplitudes);

  static StateVector basis(int num_qubits, std::uint64_t index);

  int num_qubits() const { return num_qubits_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Complex operator[](Eigen::Index i) const { return amplitudes_(i); }
  double norm() const { return amplitudes_.norm(); }

  void apply(const Gate& gate);

 private:
  int num_qubits_;
  Eigen::VectorXcd amplitudes_;
};

StateVector apply_circuit(StateVector state, const Circuit& circuit);

/// Real amplitude encoding via a binary tree of uniformly controlled Ry
/// rotations. The target is real, unit norm, with power-of-two length.
Circuit prepare_state(const Eigen::VectorXd& target);

struct PostSelected {
  StateVector state;
  double probability;
};

double outcome_probability(const StateVector& state, Qubit qubit, int outcome);

/// Collapses `qubit` onto `outcome` and renormalizes. Throws
/// PostSelectionError when the outcome probability is below min_probability.
PostSelected post_select(const StateVector& state, Qubit qubit, int outcome,
                         double min_probability = 1e-300);

/// Rewrites every gate into Cnot and SingleQubit gates with the same overall
/// unitary (global phase included).
Circuit lower_to_basis(const Circuit& circuit);
bool is_lowered(const Circuit& circuit);

struct CircuitMetrics {
  int width = 0;
  int depth = 0;
  int cnot_count = 0;

  bool operator==(const CircuitMetrics&) const = default;
};

/// Metrics of the lowered circuit (lowering first when needed). Depth is the
/// longest chain of basis gates that share a qubit.
CircuitMetrics metrics(const Circuit& circuit);

// Text dump, one gate per line; see README for the grammar.
std::string to_text(const Circuit& circuit);
Circuit from_text(std::string_view text);

}  // namespace qpf::qsim
