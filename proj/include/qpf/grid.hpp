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

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qpf::grid {

struct Bus {
  int id = 0;
  bool slack = false;
  double p_injection = 0.0;  // per-unit, generation positive
};

struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double x = 0.0;  // per-unit series reactance
};

struct Network {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;

  const Bus& slack_bus() const;
};

/// Full bus-branch susceptance matrix before slack elimination. Row i
/// belongs to bus_ids[i]; bus_ids is ascending.
struct AdmittanceMatrix {
  Eigen::MatrixXd b;
  std::vector<int> bus_ids;
};

/// The linear system B * theta = p with the slack row and column removed.
struct ReducedSystem {
  Eigen::MatrixXd b;
  Eigen::VectorXd p;
  std::vector<int> bus_order;  // non-slack bus ids in row order (ascending)

  Eigen::Index size() const { return b.rows(); }
};

struct NetworkStats {
  int n = 0;
  int s = 0;
  double k_ratio = 0.0;  // lambda_min / lambda_max of the reduced matrix
  Eigen::VectorXd eigenvalues;
};

// Parsing and validation. Every invariant of Network is enforced here;
// the remaining functions assume a validated network.
Network parse_network(std::string_view json_text);
Network load_network(std::istream& in);
Network load_network(const std::filesystem::path& path);
void validate(const Network& network);

/// The embedded WSCC 9-bus, 3-generator test system (100 MVA base).
Network wscc9();
std::string_view wscc9_json();

/// Fixture lookup by name; throws InvalidInput for unknown names.
Network fixture(std::string_view name);

AdmittanceMatrix build_admittance(const Network& network);
ReducedSystem build_reduced_system(const Network& network);

/// Angles (radians) of the non-slack buses in sys.bus_order, via LLT.
Eigen::VectorXd solve_dc(const ReducedSystem& sys);

NetworkStats network_stats(const Network& network);

/// Per-branch flows (theta_from - theta_to) / x, in network.branches order.
/// `angles` is indexed like ReducedSystem::bus_order; the slack angle is 0.
Eigen::VectorXd branch_flows(const Network& network, const ReducedSystem& sys,
                             const Eigen::VectorXd& angles);

}  // namespace qpf::grid
