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

#include "qpf/grid.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qpf/errors.hpp"
#include "wscc9_fixture.hpp"

namespace qpf::grid {

using nlohmann::json;

namespace {

void reject_unknown_fields(const json& obj, std::initializer_list<std::string_view> allowed,
                           std::string_view where) {
  if (!obj.is_object()) {
    throw ParseError(std::string(where) + ": expected an object");
  }
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ParseError(std::string(where) + ": unknown field '" + key + "'");
    }
  }
}

template <typename T>
T required(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string(where) + ": missing field '" + key + "'");
  }
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string(where) + ": field '" + key + "' has the wrong type");
  }
}

// Integer ids must be written as integers, not 2.0.
int required_id(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string(where) + ": missing field '" + key + "'");
  }
  if (!it->is_number_integer()) {
    throw ParseError(std::string(where) + ": field '" + key + "' must be an integer");
  }
  return it->get<int>();
}

bool is_connected(const Network& network) {
  std::map<int, int> index;
  for (const auto& bus : network.buses) {
    index.emplace(bus.id, static_cast<int>(index.size()));
  }
  std::vector<int> parent(index.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) {
      parent[v] = parent[parent[v]];
      v = parent[v];
    }
    return v;
  };
  std::size_t components = index.size();
  for (const auto& br : network.branches) {
    int a = find(index.at(br.from_bus));
    int b = find(index.at(br.to_bus));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components == 1;
}

}  // namespace

const Bus& Network::slack_bus() const {
  auto it = std::find_if(buses.begin(), buses.end(), [](const Bus& b) { return b.slack; });
  if (it == buses.end()) {
    throw InvalidInput("no slack bus");
  }
  return *it;
}

void validate(const Network& network) {
  if (!(network.base_mva > 0.0)) {
    throw InvalidInput("base_mva must be positive");
  }
  if (network.buses.size() < 2) {
    throw InvalidInput("network needs at least 2 buses");
  }
  std::set<int> ids;
  int slacks = 0;
  for (const auto& bus : network.buses) {
    if (bus.id <= 0) {
      throw InvalidInput("bus id must be a positive integer: " + std::to_string(bus.id));
    }
    if (!ids.insert(bus.id).second) {
      throw InvalidInput("duplicate bus id " + std::to_string(bus.id));
    }
    if (bus.slack) {
      ++slacks;
    }
  }
  if (slacks == 0) {
    throw InvalidInput("no slack bus");
  }
  if (slacks > 1) {
    throw InvalidInput("multiple slacks");
  }
  for (const auto& br : network.branches) {
    if (!(br.x > 0.0)) {
      throw InvalidInput("non-positive reactance on branch " + std::to_string(br.from_bus) +
                         "-" + std::to_string(br.to_bus));
    }
    if (br.from_bus == br.to_bus) {
      throw InvalidInput("branch connects bus " + std::to_string(br.from_bus) + " to itself");
    }
    if (!ids.contains(br.from_bus) || !ids.contains(br.to_bus)) {
      throw InvalidInput("branch " + std::to_string(br.from_bus) + "-" +
                         std::to_string(br.to_bus) + " references an unknown bus");
    }
  }
  if (!is_connected(network)) {
    throw InvalidInput("disconnected network");
  }
}

Network parse_network(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  reject_unknown_fields(doc, {"base_mva", "buses", "branches"}, "network");

  Network net;
  net.base_mva = required<double>(doc, "base_mva", "network");
  const auto buses = required<json>(doc, "buses", "network");
  const auto branches = required<json>(doc, "branches", "network");
  if (!buses.is_array() || !branches.is_array()) {
    throw ParseError("network: 'buses' and 'branches' must be arrays");
  }
  for (const auto& b : buses) {
    reject_unknown_fields(b, {"id", "slack", "p_pu"}, "bus");
    net.buses.push_back({required_id(b, "id", "bus"), required<bool>(b, "slack", "bus"),
                         required<double>(b, "p_pu", "bus")});
  }
  for (const auto& br : branches) {
    reject_unknown_fields(br, {"from", "to", "x_pu"}, "branch");
    net.branches.push_back({required_id(br, "from", "branch"), required_id(br, "to", "branch"),
                            required<double>(br, "x_pu", "branch")});
  }
  validate(net);
  return net;
}

Network load_network(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  return load_network(in);
}

std::string_view wscc9_json() { return detail::kWscc9Json; }

Network wscc9() { return parse_network(wscc9_json()); }

Network fixture(std::string_view name) {
  if (name == "wscc9") {
    return wscc9();
  }
  throw InvalidInput("unknown fixture '" + std::string(name) + "'");
}

AdmittanceMatrix build_admittance(const Network& network) {
  AdmittanceMatrix out;
  for (const auto& bus : network.buses) {
    out.bus_ids.push_back(bus.id);
  }
  std::sort(out.bus_ids.begin(), out.bus_ids.end());
  std::map<int, Eigen::Index> row;
  for (std::size_t i = 0; i < out.bus_ids.size(); ++i) {
    row[out.bus_ids[i]] = static_cast<Eigen::Index>(i);
  }

  const auto n = static_cast<Eigen::Index>(out.bus_ids.size());
  out.b = Eigen::MatrixXd::Zero(n, n);
  for (const auto& br : network.branches) {
    const double y = 1.0 / br.x;
    const auto i = row.at(br.from_bus);
    const auto j = row.at(br.to_bus);
    out.b(i, i) += y;
    out.b(j, j) += y;
    out.b(i, j) -= y;
    out.b(j, i) -= y;
  }
  return out;
}

ReducedSystem build_reduced_system(const Network& network) {
  const auto full = build_admittance(network);
  const int slack_id = network.slack_bus().id;

  std::map<int, double> injection;
  for (const auto& bus : network.buses) {
    injection[bus.id] = bus.p_injection;
  }

  std::vector<Eigen::Index> keep;
  ReducedSystem sys;
  for (std::size_t i = 0; i < full.bus_ids.size(); ++i) {
    if (full.bus_ids[i] != slack_id) {
      keep.push_back(static_cast<Eigen::Index>(i));
      sys.bus_order.push_back(full.bus_ids[i]);
    }
  }
  const auto n = static_cast<Eigen::Index>(keep.size());
  sys.b = full.b(keep, keep);
  sys.p.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    sys.p(i) = injection.at(sys.bus_order[i]);
  }

  Eigen::LLT<Eigen::MatrixXd> llt(sys.b);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("singular reduced matrix (network not connected?)");
  }
  return sys;
}

Eigen::VectorXd solve_dc(const ReducedSystem& sys) {
  Eigen::LLT<Eigen::MatrixXd> llt(sys.b);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("reduced matrix is not positive definite");
  }
  return llt.solve(sys.p);
}

NetworkStats network_stats(const Network& network) {
  const auto sys = build_reduced_system(network);
  NetworkStats st;
  st.n = static_cast<int>(sys.size());
  for (Eigen::Index i = 0; i < sys.b.rows(); ++i) {
    st.s = std::max(st.s, static_cast<int>((sys.b.row(i).array() != 0.0).count()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sys.b, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigenvalue computation failed");
  }
  st.eigenvalues = es.eigenvalues();
  st.k_ratio = st.eigenvalues.minCoeff() / st.eigenvalues.maxCoeff();
  return st;
}

Eigen::VectorXd branch_flows(const Network& network, const ReducedSystem& sys,
                             const Eigen::VectorXd& angles) {
  std::map<int, double> theta;
  theta[network.slack_bus().id] = 0.0;
  for (std::size_t i = 0; i < sys.bus_order.size(); ++i) {
    theta[sys.bus_order[i]] = angles(static_cast<Eigen::Index>(i));
  }
  Eigen::VectorXd flows(static_cast<Eigen::Index>(network.branches.size()));
  for (std::size_t k = 0; k < network.branches.size(); ++k) {
    const auto& br = network.branches[k];
    flows(static_cast<Eigen::Index>(k)) = (theta.at(br.from_bus) - theta.at(br.to_bus)) / br.x;
  }
  return flows;
}

}  // namespace qpf::grid
