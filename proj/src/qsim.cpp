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

#include "qpf/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "qpf/errors.hpp"

namespace qpf::qsim {

namespace {

using Index = std::uint64_t;

Index bit(Qubit q) { return Index{1} << q; }

struct GateValidator {
  int num_qubits;

  void check_qubit(Qubit q) const {
    if (q < 0 || q >= num_qubits) {
      throw InvalidInput("qubit index " + std::to_string(q) + " out of range for " +
                         std::to_string(num_qubits) + "-qubit circuit");
    }
  }

  void check_distinct(const std::vector<Qubit>& qs) const {
    std::set<Qubit> seen;
    for (Qubit q : qs) {
      check_qubit(q);
      if (!seen.insert(q).second) {
        throw InvalidInput("gate uses qubit " + std::to_string(q) + " more than once");
      }
    }
  }

  void operator()(const SingleQubit& g) const {
    check_qubit(g.target);
    if (!is_unitary(g.u)) {
      throw InvalidInput("single-qubit matrix is not unitary");
    }
  }

  void operator()(const Cnot& g) const { check_distinct({g.control, g.target}); }

  void operator()(const ControlledUnitary& g) const {
    if (g.targets.empty()) {
      throw InvalidInput("controlled unitary needs at least one target");
    }
    std::vector<Qubit> all = g.controls;
    all.insert(all.end(), g.targets.begin(), g.targets.end());
    check_distinct(all);
    const auto dim = Eigen::Index{1} << g.targets.size();
    if (g.u.rows() != dim || g.u.cols() != dim) {
      throw InvalidInput("controlled unitary matrix size does not match its targets");
    }
    if (g.controls.size() < 64 && g.control_pattern >= bit(static_cast<Qubit>(g.controls.size()))) {
      throw InvalidInput("control pattern has more bits than there are controls");
    }
    if (!is_unitary(g.u)) {
      throw InvalidInput("controlled unitary matrix is not unitary");
    }
  }

  void operator()(const UniformlyControlledRy& g) const {
    std::vector<Qubit> all = g.controls;
    all.push_back(g.target);
    check_distinct(all);
    if (g.angles.size() != (std::size_t{1} << g.controls.size())) {
      throw InvalidInput("uniformly controlled Ry needs 2^controls angles");
    }
  }
};

// Offsets of the 2^m local basis states of `targets` within a global index.
std::vector<Index> target_offsets(const std::vector<Qubit>& targets) {
  std::vector<Index> offsets(std::size_t{1} << targets.size(), 0);
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    for (std::size_t j = 0; j < targets.size(); ++j) {
      if ((k >> j) & 1U) {
        offsets[k] |= bit(targets[j]);
      }
    }
  }
  return offsets;
}

Index spread(std::uint64_t value, const std::vector<Qubit>& qubits) {
  Index out = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if ((value >> i) & 1U) {
      out |= bit(qubits[i]);
    }
  }
  return out;
}

std::uint64_t gather(Index index, const std::vector<Qubit>& qubits) {
  std::uint64_t out = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (index & bit(qubits[i])) {
      out |= std::uint64_t{1} << i;
    }
  }
  return out;
}

struct Kernel {
  Eigen::VectorXcd& a;

  Index dim() const { return static_cast<Index>(a.size()); }

  void operator()(const SingleQubit& g) const {
    const Index step = bit(g.target);
    const auto& u = g.u;
    for (Index i = 0; i < dim(); ++i) {
      if (i & step) {
        continue;
      }
      const Complex a0 = a(i);
      const Complex a1 = a(i | step);
      a(i) = u(0, 0) * a0 + u(0, 1) * a1;
      a(i | step) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }

  void operator()(const Cnot& g) const {
    const Index c = bit(g.control);
    const Index t = bit(g.target);
    for (Index i = 0; i < dim(); ++i) {
      if ((i & c) && !(i & t)) {
        std::swap(a(i), a(i | t));
      }
    }
  }

  void operator()(const ControlledUnitary& g) const {
    const auto offsets = target_offsets(g.targets);
    const Index target_mask = offsets.back();
    const Index control_mask = spread(~std::uint64_t{0}, g.controls);
    const Index control_value = spread(g.control_pattern, g.controls);
    const auto local = static_cast<Eigen::Index>(offsets.size());
    Eigen::VectorXcd in(local);
    for (Index i = 0; i < dim(); ++i) {
      if ((i & target_mask) || (i & control_mask) != control_value) {
        continue;
      }
      for (Eigen::Index k = 0; k < local; ++k) {
        in(k) = a(i | offsets[k]);
      }
      const Eigen::VectorXcd out = g.u * in;
      for (Eigen::Index k = 0; k < local; ++k) {
        a(i | offsets[k]) = out(k);
      }
    }
  }

  void operator()(const UniformlyControlledRy& g) const {
    const Index t = bit(g.target);
    for (Index i = 0; i < dim(); ++i) {
      if (i & t) {
        continue;
      }
      const double theta = g.angles[gather(i, g.controls)];
      const double c = std::cos(theta / 2);
      const double s = std::sin(theta / 2);
      const Complex a0 = a(i);
      const Complex a1 = a(i | t);
      a(i) = c * a0 - s * a1;
      a(i | t) = s * a0 + c * a1;
    }
  }
};

int qubits_for_dimension(Eigen::Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw InvalidInput("state dimension must be a power of two >= 2, got " +
                       std::to_string(dim));
  }
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

}  // namespace

// --- gates -----------------------------------------------------------------

std::vector<Qubit> qubits_of(const Gate& gate) {
  return std::visit(
      [](const auto& g) -> std::vector<Qubit> {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, SingleQubit>) {
          return {g.target};
        } else if constexpr (std::is_same_v<T, Cnot>) {
          return {g.control, g.target};
        } else if constexpr (std::is_same_v<T, ControlledUnitary>) {
          std::vector<Qubit> q = g.controls;
          q.insert(q.end(), g.targets.begin(), g.targets.end());
          return q;
        } else {
          std::vector<Qubit> q = g.controls;
          q.push_back(g.target);
          return q;
        }
      },
      gate);
}

Gate adjoint(const Gate& gate) {
  return std::visit(
      [](const auto& g) -> Gate {
        using T = std::decay_t<decltype(g)>;
        T out = g;
        if constexpr (std::is_same_v<T, SingleQubit>) {
          out.u = g.u.adjoint();
        } else if constexpr (std::is_same_v<T, ControlledUnitary>) {
          out.u = g.u.adjoint();
        } else if constexpr (std::is_same_v<T, UniformlyControlledRy>) {
          for (auto& a : out.angles) {
            a = -a;
          }
        }
        return out;
      },
      gate);
}

Eigen::Matrix2cd hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd h;
  h << r, r, r, -r;
  return h;
}

Eigen::Matrix2cd pauli_x() {
  Eigen::Matrix2cd x;
  x << 0, 1, 1, 0;
  return x;
}

Eigen::Matrix2cd ry(double theta) {
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

Eigen::Matrix2cd rz(double theta) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, -theta / 2);
  m(1, 1) = std::polar(1.0, theta / 2);
  return m;
}

Eigen::Matrix2cd phase(double phi) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
  m(1, 1) = std::polar(1.0, phi);
  return m;
}

// --- circuit ---------------------------------------------------------------

Circuit::Circuit(int num_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > 30) {
    throw InvalidInput("circuit width must be in [1, 30], got " + std::to_string(num_qubits));
  }
}

Circuit& Circuit::add(Gate gate) {
  std::visit(GateValidator{num_qubits_}, gate);
  gates_.push_back(std::move(gate));
  return *this;
}

Circuit& Circuit::append(const Circuit& other) {
  if (other.num_qubits_ > num_qubits_) {
    throw InvalidInput("appended circuit is wider than the destination");
  }
  gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
  return *this;
}

Circuit& Circuit::append(const Circuit& other, std::span<const Qubit> qubit_map) {
  if (qubit_map.size() != static_cast<std::size_t>(other.num_qubits_)) {
    throw InvalidInput("qubit map size must equal the appended circuit's width");
  }
  auto remap = [&](Qubit q) { return qubit_map[static_cast<std::size_t>(q)]; };
  for (const auto& gate : other.gates_) {
    Gate g = gate;
    std::visit(
        [&](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, SingleQubit>) {
            x.target = remap(x.target);
          } else if constexpr (std::is_same_v<T, Cnot>) {
            x.control = remap(x.control);
            x.target = remap(x.target);
          } else if constexpr (std::is_same_v<T, ControlledUnitary>) {
            std::transform(x.controls.begin(), x.controls.end(), x.controls.begin(), remap);
            std::transform(x.targets.begin(), x.targets.end(), x.targets.begin(), remap);
          } else {
            std::transform(x.controls.begin(), x.controls.end(), x.controls.begin(), remap);
            x.target = remap(x.target);
          }
        },
        g);
    add(std::move(g));
  }
  return *this;
}

Circuit Circuit::inverse() const {
  Circuit out(num_qubits_);
  out.gates_.reserve(gates_.size());
  for (auto it = gates_.rbegin(); it != gates_.rend(); ++it) {
    out.gates_.push_back(adjoint(*it));
  }
  return out;
}

// --- statevector -----------------------------------------------------------

StateVector::StateVector(int num_qubits)
    : num_qubits_(num_qubits), amplitudes_(Eigen::VectorXcd::Zero(Eigen::Index{1} << num_qubits)) {
  amplitudes_(0) = 1.0;
}

StateVector::StateVector(Eigen::VectorXcd amplitudes)
    : num_qubits_(qubits_for_dimension(amplitudes.size())), amplitudes_(std::move(amplitudes)) {
  if (std::abs(amplitudes_.squaredNorm() - 1.0) > kNormTolerance) {
    throw InvalidInput("state vector is not normalized");
  }
}

StateVector StateVector::basis(int num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  if (index >= static_cast<std::uint64_t>(s.dimension())) {
    throw InvalidInput("basis index out of range");
  }
  s.amplitudes_(0) = 0.0;
  s.amplitudes_(static_cast<Eigen::Index>(index)) = 1.0;
  return s;
}

void StateVector::apply(const Gate& gate) {
  std::visit(GateValidator{num_qubits_}, gate);
  std::visit(Kernel{amplitudes_}, gate);
}

StateVector apply_circuit(StateVector state, const Circuit& circuit) {
  if (state.num_qubits() != circuit.num_qubits()) {
    throw InvalidInput("state has " + std::to_string(state.num_qubits()) +
                       " qubits but circuit has " + std::to_string(circuit.num_qubits()));
  }
  for (const auto& gate : circuit.gates()) {
    state.apply(gate);
  }
  return state;
}

// --- state preparation -----------------------------------------------------

Circuit prepare_state(const Eigen::VectorXd& target) {
  const int n = qubits_for_dimension(target.size());
  if (std::abs(target.squaredNorm() - 1.0) > kNormTolerance) {
    throw InvalidInput("target vector is not normalized");
  }

  // Subtree norms: level l holds 2^l entries, the norms of blocks of size
  // 2^(n-l) split on the top l qubits.
  std::vector<Eigen::VectorXd> norms(static_cast<std::size_t>(n) + 1);
  norms[static_cast<std::size_t>(n)] = target;
  for (int l = n - 1; l >= 0; --l) {
    const auto& child = norms[static_cast<std::size_t>(l) + 1];
    Eigen::VectorXd v(Eigen::Index{1} << l);
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      v(i) = std::hypot(child(2 * i), child(2 * i + 1));
    }
    norms[static_cast<std::size_t>(l)] = v;
  }

  Circuit circuit(n);
  for (int l = 0; l < n; ++l) {
    // Level l splits on qubit n-1-l, controlled by the l more significant qubits.
    const Qubit q = n - 1 - l;
    const auto& child = norms[static_cast<std::size_t>(l) + 1];
    std::vector<double> angles(std::size_t{1} << l);
    bool trivial = true;
    for (std::size_t c = 0; c < angles.size(); ++c) {
      const auto i = static_cast<Eigen::Index>(c);
      // The leaf level keeps signs; inner levels see non-negative norms.
      angles[c] = 2.0 * std::atan2(child(2 * i + 1), child(2 * i));
      trivial = trivial && angles[c] == 0.0;
    }
    if (trivial) {
      continue;
    }
    UniformlyControlledRy g;
    g.target = q;
    for (int j = 0; j < l; ++j) {
      g.controls.push_back(q + 1 + j);
    }
    g.angles = std::move(angles);
    circuit.add(std::move(g));
  }
  return circuit;
}

// --- measurement -----------------------------------------------------------

double outcome_probability(const StateVector& state, Qubit qubit, int outcome) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw InvalidInput("qubit index out of range");
  }
  if (outcome != 0 && outcome != 1) {
    throw InvalidInput("outcome must be 0 or 1");
  }
  const Index mask = bit(qubit);
  double p = 0.0;
  for (Eigen::Index i = 0; i < state.dimension(); ++i) {
    const bool set = (static_cast<Index>(i) & mask) != 0;
    if (set == (outcome == 1)) {
      p += std::norm(state[i]);
    }
  }
  return p;
}

PostSelected post_select(const StateVector& state, Qubit qubit, int outcome,
                         double min_probability) {
  const double p = outcome_probability(state, qubit, outcome);
  if (!(p > min_probability)) {
    throw PostSelectionError("outcome " + std::to_string(outcome) + " on qubit " +
                             std::to_string(qubit) + " has probability " + std::to_string(p));
  }
  const Index mask = bit(qubit);
  Eigen::VectorXcd a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const bool set = (static_cast<Index>(i) & mask) != 0;
    if (set != (outcome == 1)) {
      a(i) = 0.0;
    }
  }
  a /= std::sqrt(p);
  return {StateVector(std::move(a)), p};
}

// --- metrics ---------------------------------------------------------------

bool is_lowered(const Circuit& circuit) {
  return std::all_of(circuit.gates().begin(), circuit.gates().end(), [](const Gate& g) {
    return std::holds_alternative<SingleQubit>(g) || std::holds_alternative<Cnot>(g);
  });
}

CircuitMetrics metrics(const Circuit& circuit) {
  if (!is_lowered(circuit)) {
    return metrics(lower_to_basis(circuit));
  }
  CircuitMetrics m;
  m.width = circuit.num_qubits();
  std::vector<int> frontier(static_cast<std::size_t>(circuit.num_qubits()), 0);
  for (const auto& gate : circuit.gates()) {
    const auto qs = qubits_of(gate);
    int level = 0;
    for (Qubit q : qs) {
      level = std::max(level, frontier[static_cast<std::size_t>(q)]);
    }
    ++level;
    for (Qubit q : qs) {
      frontier[static_cast<std::size_t>(q)] = level;
    }
    m.depth = std::max(m.depth, level);
    if (std::holds_alternative<Cnot>(gate)) {
      ++m.cnot_count;
    }
  }
  return m;
}

}  // namespace qpf::qsim
