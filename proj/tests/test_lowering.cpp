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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qpf/grid.hpp"
#include "qpf/hhl.hpp"
#include "qpf/qsim.hpp"
#include "test_util.hpp"

using namespace qpf;
using namespace qpf::qsim;
using namespace qpf::testing;

namespace {

constexpr double kLoweringTol = 1e-8;

bool is_ry(const Gate& g, double theta) {
  const auto* sq = std::get_if<SingleQubit>(&g);
  return sq != nullptr && (sq->u - ry(theta)).cwiseAbs().maxCoeff() < 1e-12;
}

}  // namespace

TEST_CASE("a lone cnot is already lowered") {
  Circuit c(2);
  c.add(Cnot{1, 0});
  const auto low = lower_to_basis(c);
  REQUIRE(low.size() == 1);
  const auto& g = std::get<Cnot>(low.gates()[0]);
  CHECK(g.control == 1);
  CHECK(g.target == 0);
  CHECK(is_lowered(low));
  CHECK_FALSE(is_lowered([] {
    Circuit u(2);
    u.add(UniformlyControlledRy{{1}, 0, {0.1, 0.2}});
    return u;
  }()));
}

TEST_CASE("controlled Ry lowers to two cnots and two half-angle rotations") {
  for (const bool as_ucry : {false, true}) {
    Circuit c(2);
    if (as_ucry) {
      c.add(UniformlyControlledRy{{1}, 0, {0.0, M_PI / 2}});
    } else {
      c.add(ControlledUnitary{{1}, 1, {0}, ry(M_PI / 2)});
    }
    const auto low = lower_to_basis(c);
    CHECK(max_abs_diff(circuit_matrix(low), circuit_matrix(c)) <= kLoweringTol);
    REQUIRE(low.size() == 4);
    int cnots = 0;
    int plus = 0;
    int minus = 0;
    for (const auto& g : low.gates()) {
      cnots += std::holds_alternative<Cnot>(g) ? 1 : 0;
      plus += is_ry(g, M_PI / 4) ? 1 : 0;
      minus += is_ry(g, -M_PI / 4) ? 1 : 0;
    }
    CHECK(cnots == 2);
    CHECK(plus == 1);
    CHECK(minus == 1);
  }
}

TEST_CASE("uniformly controlled Ry uses 2^k rotations and 2^k cnots") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> angle(-M_PI, M_PI);
  for (int k = 1; k <= 4; ++k) {
    UniformlyControlledRy g;
    g.target = 0;
    for (int i = 1; i <= k; ++i) {
      g.controls.push_back(i);
    }
    for (int i = 0; i < (1 << k); ++i) {
      g.angles.push_back(angle(rng));
    }
    Circuit c(k + 1);
    c.add(g);
    const auto low = lower_to_basis(c);
    const auto m = metrics(c);
    CHECK(m.cnot_count == (1 << k));
    CHECK(static_cast<int>(low.size()) == 2 * (1 << k));
    CHECK(max_abs_diff(circuit_matrix(low), circuit_matrix(c)) <= kLoweringTol);
  }
}

TEST_CASE("random controlled unitaries lower exactly") {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 40; ++trial) {
    const int targets = 1 + trial % 3;
    const int controls = std::uniform_int_distribution<int>(0, 3 - targets)(rng);
    const auto q = pick_qubits(3, targets + controls, rng);
    ControlledUnitary g;
    g.controls.assign(q.begin(), q.begin() + controls);
    g.targets.assign(q.begin() + controls, q.end());
    g.control_pattern =
        std::uniform_int_distribution<std::uint64_t>(0, (1U << controls) - 1)(rng);
    g.u = random_unitary(Eigen::Index{1} << targets, rng);
    Circuit c(3);
    c.add(g);
    const auto low = lower_to_basis(c);
    REQUIRE(is_lowered(low));
    CHECK(max_abs_diff(circuit_matrix(low), circuit_matrix(c)) <= kLoweringTol);
  }
}

TEST_CASE("special unitaries lower exactly") {
  // Diagonal, permutation and near-identity blocks exercise skipped steps.
  std::vector<Eigen::MatrixXcd> blocks;
  Eigen::MatrixXcd diag = Eigen::MatrixXcd::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    diag(i, i) = std::polar(1.0, 0.3 * i);
  }
  blocks.push_back(diag);
  Eigen::MatrixXcd perm = Eigen::MatrixXcd::Zero(4, 4);
  perm(1, 0) = perm(2, 1) = perm(3, 2) = perm(0, 3) = 1.0;
  blocks.push_back(perm);
  blocks.push_back(Eigen::MatrixXcd::Identity(4, 4));
  blocks.push_back(-Eigen::MatrixXcd::Identity(4, 4));
  for (const auto& u : blocks) {
    Circuit c(3);
    c.add(ControlledUnitary{{2}, 1, {0, 1}, u});
    const auto low = lower_to_basis(c);
    CHECK(max_abs_diff(circuit_matrix(low), circuit_matrix(c)) <= kLoweringTol);
  }
}

TEST_CASE("random circuits on up to three qubits lower exactly") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 3;
    Circuit c(n);
    const int gates = std::uniform_int_distribution<int>(1, 8)(rng);
    for (int g = 0; g < gates; ++g) {
      c.add(random_gate(n, rng));
    }
    const auto low = lower_to_basis(c);
    REQUIRE(is_lowered(low));
    CHECK(max_abs_diff(circuit_matrix(low), circuit_matrix(c)) <= kLoweringTol);
  }
}

TEST_CASE("fast and lowered paths agree on the wscc9 circuit") {
  const auto sys = grid::build_reduced_system(grid::wscc9());
  hhl::HHLConfig cfg;
  const auto hc = hhl::build_hhl_circuit(sys.b, sys.p, cfg);
  const auto low = lower_to_basis(hc.circuit);
  REQUIRE(is_lowered(low));
  const auto fast = apply_circuit(StateVector(hc.layout.width()), hc.circuit);
  const auto slow = apply_circuit(StateVector(hc.layout.width()), low);
  CHECK(max_abs_diff(fast.amplitudes(), slow.amplitudes()) <= kLoweringTol);
  CHECK(metrics(hc.circuit) == metrics(low));
}
