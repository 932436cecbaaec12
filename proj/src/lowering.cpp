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

// Lowering of the gate set to {Cnot, SingleQubit}.
//
//   ControlledUnitary on m targets
//     -> two-level rotations between Gray-code neighbours (each one a
//        single-qubit unitary under m-1 extra controls)
//     -> multi-controlled single-qubit unitaries, zero-controls conjugated by X
//     -> k >= 2 controls: square-root recursion; k == 1: A X B X C form
//   UniformlyControlledRy on k controls -> 2^k Ry + 2^k Cnot (Gray-code walk)

#include <bit>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "qpf/qsim.hpp"

namespace qpf::qsim {

namespace {

constexpr double kIdentityTolerance = 1e-13;

bool near_identity(const Eigen::Matrix2cd& u) {
  return (u - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() < kIdentityTolerance;
}

bool near_x(const Eigen::Matrix2cd& u) {
  return (u - pauli_x()).cwiseAbs().maxCoeff() < kIdentityTolerance;
}

// Principal square root of a 2x2 unitary.
Eigen::Matrix2cd unitary_sqrt(const Eigen::Matrix2cd& u) {
  Eigen::ComplexSchur<Eigen::Matrix2cd> schur(u);
  const Eigen::Matrix2cd& z = schur.matrixU();
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = std::sqrt(schur.matrixT()(0, 0));
  d(1, 1) = std::sqrt(schur.matrixT()(1, 1));
  return z * d * z.adjoint();
}

// u = e^{i phi} Rz(beta) Ry(gamma) Rz(delta)
struct ZyzAngles {
  double phi, beta, gamma, delta;
};

ZyzAngles zyz(const Eigen::Matrix2cd& u) {
  const Complex det = u.determinant();
  const double phi = std::arg(det) / 2;
  const Eigen::Matrix2cd v = u * std::polar(1.0, -phi);
  const Complex a = v(0, 0);
  const Complex b = v(1, 0);
  const double gamma = 2.0 * std::atan2(std::abs(b), std::abs(a));
  const double sum = std::abs(a) > 1e-14 ? -2.0 * std::arg(a) : 0.0;
  const double diff = std::abs(b) > 1e-14 ? 2.0 * std::arg(b) : 0.0;
  return {phi, (sum + diff) / 2, gamma, (sum - diff) / 2};
}

class Lowerer {
 public:
  explicit Lowerer(Circuit& out) : out_(out) {}

  void single(Qubit target, const Eigen::Matrix2cd& u) {
    if (!near_identity(u)) {
      out_.add(SingleQubit{target, u});
    }
  }

  void cnot(Qubit control, Qubit target) { out_.add(Cnot{control, target}); }

  // Controlled-u with one control: C, CX, B, CX, A on the target and a phase
  // on the control.
  void controlled(Qubit control, Qubit target, const Eigen::Matrix2cd& u) {
    if (near_identity(u)) {
      return;
    }
    if (near_x(u)) {
      cnot(control, target);
      return;
    }
    const auto [phi, beta, gamma, delta] = zyz(u);
    const Eigen::Matrix2cd a = rz(beta) * ry(gamma / 2);
    const Eigen::Matrix2cd b = ry(-gamma / 2) * rz(-(delta + beta) / 2);
    const Eigen::Matrix2cd c = rz((delta - beta) / 2);
    single(target, c);
    cnot(control, target);
    single(target, b);
    cnot(control, target);
    single(target, a);
    single(control, phase(phi));
  }

  // All controls must read 1.
  void multi_controlled(const std::vector<Qubit>& controls, Qubit target,
                        const Eigen::Matrix2cd& u) {
    if (controls.empty()) {
      single(target, u);
      return;
    }
    if (controls.size() == 1) {
      controlled(controls.front(), target, u);
      return;
    }
    if (near_identity(u)) {
      return;
    }
    const Qubit last = controls.back();
    const std::vector<Qubit> rest(controls.begin(), controls.end() - 1);
    const Eigen::Matrix2cd v = unitary_sqrt(u);
    controlled(last, target, v);
    multi_controlled(rest, last, pauli_x());
    controlled(last, target, v.adjoint());
    multi_controlled(rest, last, pauli_x());
    multi_controlled(rest, target, v);
  }

  void multi_controlled(const std::vector<Qubit>& controls, std::uint64_t pattern, Qubit target,
                        const Eigen::Matrix2cd& u) {
    std::vector<Qubit> flipped;
    for (std::size_t i = 0; i < controls.size(); ++i) {
      if (!((pattern >> i) & 1U)) {
        flipped.push_back(controls[i]);
      }
    }
    for (Qubit q : flipped) {
      single(q, pauli_x());
    }
    multi_controlled(controls, target, u);
    for (Qubit q : flipped) {
      single(q, pauli_x());
    }
  }

  void lower(const ControlledUnitary& g) {
    const std::size_t m = g.targets.size();
    if (m == 1) {
      multi_controlled(g.controls, g.control_pattern, g.targets.front(), g.u);
      return;
    }
    const auto d = Eigen::Index{1} << m;
    auto gray = [](Eigen::Index r) { return r ^ (r >> 1); };

    Eigen::MatrixXcd w(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
      for (Eigen::Index s = 0; s < d; ++s) {
        w(r, s) = g.u(gray(r), gray(s));
      }
    }

    // Reduce w to the identity with two-level unitaries acting on Gray
    // neighbours (r-1, r): steps[K-1] ... steps[0] * w == I.
    struct Step {
      Eigen::Index r;
      Eigen::Matrix2cd m;
    };
    std::vector<Step> steps;
    auto apply_step = [&](Eigen::Index r, const Eigen::Matrix2cd& m2) {
      const Eigen::MatrixXcd rows = w.middleRows(r - 1, 2);
      w.middleRows(r - 1, 2) = m2 * rows;
      if (!steps.empty() && steps.back().r == r) {
        steps.back().m = m2 * steps.back().m;
      } else {
        steps.push_back({r, m2});
      }
    };
    for (Eigen::Index c = 0; c + 1 < d; ++c) {
      for (Eigen::Index r = d - 1; r > c; --r) {
        const Complex x = w(r - 1, c);
        const Complex y = w(r, c);
        if (std::abs(y) < 1e-15) {
          continue;
        }
        const double n = std::hypot(std::abs(x), std::abs(y));
        Eigen::Matrix2cd giv;
        giv << std::conj(x) / n, std::conj(y) / n, -y / n, x / n;
        apply_step(r, giv);
      }
      const Complex ph = w(c, c) / std::abs(w(c, c));
      Eigen::Matrix2cd fix = Eigen::Matrix2cd::Zero();
      fix(0, 0) = std::conj(ph);
      fix(1, 1) = ph;
      apply_step(c + 1, fix);
    }
    {
      const Complex ph = w(d - 1, d - 1) / std::abs(w(d - 1, d - 1));
      Eigen::Matrix2cd fix = Eigen::Matrix2cd::Identity();
      fix(1, 1) = std::conj(ph);
      apply_step(d - 1, fix);
    }

    // u = steps[0]^dag ... steps[K-1]^dag, so the last step runs first.
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
      two_level(g, gray(it->r - 1), gray(it->r), it->m.adjoint());
    }
  }

  void lower(const UniformlyControlledRy& g) {
    const std::size_t k = g.controls.size();
    const std::size_t n = std::size_t{1} << k;
    if (k == 0) {
      single(g.target, ry(g.angles.front()));
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t code = i ^ (i >> 1);
      double angle = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        angle += (std::popcount(j & code) % 2 ? -1.0 : 1.0) * g.angles[j];
      }
      out_.add(SingleQubit{g.target, ry(angle / static_cast<double>(n))});
      // Gray-code bit flipped between step i and i+1 (wrapping to 0).
      const std::size_t flip =
          i + 1 < n ? static_cast<std::size_t>(std::countr_zero(i + 1)) : k - 1;
      cnot(g.controls[flip], g.target);
    }
  }

 private:
  // Two-level unitary m on local basis states (a, b) of g.targets, a and b
  // differing in exactly one bit.
  void two_level(const ControlledUnitary& g, Eigen::Index a, Eigen::Index b,
                 const Eigen::Matrix2cd& m) {
    if (near_identity(m)) {
      return;
    }
    const int q = std::countr_zero(static_cast<std::uint64_t>(a ^ b));
    Eigen::Matrix2cd local = m;
    if ((a >> q) & 1) {
      local << m(1, 1), m(1, 0), m(0, 1), m(0, 0);
    }
    std::vector<Qubit> controls = g.controls;
    std::uint64_t pattern = g.control_pattern;
    for (std::size_t j = 0; j < g.targets.size(); ++j) {
      if (static_cast<int>(j) == q) {
        continue;
      }
      if ((a >> j) & 1) {
        pattern |= std::uint64_t{1} << controls.size();
      }
      controls.push_back(g.targets[j]);
    }
    multi_controlled(controls, pattern, g.targets[static_cast<std::size_t>(q)], local);
  }

  Circuit& out_;
};

}  // namespace

Circuit lower_to_basis(const Circuit& circuit) {
  Circuit out(circuit.num_qubits());
  Lowerer lowerer(out);
  for (const auto& gate : circuit.gates()) {
    std::visit(
        [&](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<T, SingleQubit> || std::is_same_v<T, Cnot>) {
            out.add(g);
          } else {
            lowerer.lower(g);
          }
        },
        gate);
  }
  return out;
}

}  // namespace qpf::qsim
