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

// Line format:
//   QUBITS <n>                       (first non-comment line)
//   SQ   [t] [] <8 reals>            row-major re/im pairs of the 2x2 matrix
//   CX   [t] [c]
//   CU   [t0,t1,..] [c0,..] <pattern> <2*d*d reals>
//   UCRY [t] [c0,..] <2^k angles>
// Blank lines and lines starting with '#' are ignored.

#include <cstdio>
#include <optional>
#include <sstream>

#include "qpf/errors.hpp"
#include "qpf/qsim.hpp"

namespace qpf::qsim {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<Qubit>& qs) {
  std::string s = "[";
  for (std::size_t i = 0; i < qs.size(); ++i) {
    s += (i ? "," : "") + std::to_string(qs[i]);
  }
  return s + "]";
}

template <typename Derived>
void append_matrix(std::string& line, const Eigen::MatrixBase<Derived>& u) {
  for (Eigen::Index r = 0; r < u.rows(); ++r) {
    for (Eigen::Index c = 0; c < u.cols(); ++c) {
      line += ' ' + format_double(u(r, c).real()) + ' ' + format_double(u(r, c).imag());
    }
  }
}

std::vector<Qubit> parse_list(std::istringstream& in, std::size_t line_no) {
  std::string tok;
  if (!(in >> tok) || tok.size() < 2 || tok.front() != '[' || tok.back() != ']') {
    throw ParseError("line " + std::to_string(line_no) + ": expected a [..] qubit list");
  }
  std::vector<Qubit> out;
  std::istringstream items(tok.substr(1, tok.size() - 2));
  std::string item;
  while (std::getline(items, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) {
        throw std::invalid_argument(item);
      }
    } catch (const std::exception&) {
      throw ParseError("line " + std::to_string(line_no) + ": bad qubit index '" + item + "'");
    }
  }
  return out;
}

std::vector<double> parse_reals(std::istringstream& in) {
  std::vector<double> out;
  double v = 0.0;
  while (in >> v) {
    out.push_back(v);
  }
  return out;
}

Eigen::MatrixXcd matrix_from(const std::vector<double>& reals, Eigen::Index dim,
                             std::size_t line_no) {
  if (reals.size() != static_cast<std::size_t>(2 * dim * dim)) {
    throw ParseError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(2 * dim * dim) + " matrix reals");
  }
  Eigen::MatrixXcd u(dim, dim);
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c, k += 2) {
      u(r, c) = Complex(reals[k], reals[k + 1]);
    }
  }
  return u;
}

}  // namespace

std::string to_text(const Circuit& circuit) {
  std::string text = "QUBITS " + std::to_string(circuit.num_qubits()) + "\n";
  for (const auto& gate : circuit.gates()) {
    std::string line = std::visit(
        [](const auto& g) {
          using T = std::decay_t<decltype(g)>;
          std::string s;
          if constexpr (std::is_same_v<T, SingleQubit>) {
            s = "SQ [" + std::to_string(g.target) + "] []";
            append_matrix(s, g.u);
          } else if constexpr (std::is_same_v<T, Cnot>) {
            s = "CX [" + std::to_string(g.target) + "] [" + std::to_string(g.control) + "]";
          } else if constexpr (std::is_same_v<T, ControlledUnitary>) {
            s = "CU " + format_list(g.targets) + ' ' + format_list(g.controls) + ' ' +
                std::to_string(g.control_pattern);
            append_matrix(s, g.u);
          } else {
            s = "UCRY [" + std::to_string(g.target) + "] " + format_list(g.controls);
            for (double a : g.angles) {
              s += ' ' + format_double(a);
            }
          }
          return s;
        },
        gate);
    text += line + '\n';
  }
  return text;
}

Circuit from_text(std::string_view text) {
  std::istringstream lines{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<Circuit> circuit;
  while (std::getline(lines, line)) {
    ++line_no;
    std::istringstream in(line);
    std::string kind;
    if (!(in >> kind) || kind.front() == '#') {
      continue;
    }
    const auto where = "line " + std::to_string(line_no);
    if (!circuit) {
      int n = 0;
      if (kind != "QUBITS" || !(in >> n)) {
        throw ParseError(where + ": expected 'QUBITS <n>' header");
      }
      circuit.emplace(n);
      continue;
    }
    const auto targets = parse_list(in, line_no);
    const auto controls = parse_list(in, line_no);
    if (kind == "SQ" || kind == "CX" || kind == "UCRY") {
      if (targets.size() != 1) {
        throw ParseError(where + ": " + kind + " takes exactly one target");
      }
    }
    if (kind == "SQ") {
      if (!controls.empty()) {
        throw ParseError(where + ": SQ takes no controls");
      }
      circuit->add(SingleQubit{targets[0], matrix_from(parse_reals(in), 2, line_no)});
    } else if (kind == "CX") {
      if (controls.size() != 1) {
        throw ParseError(where + ": CX takes exactly one control");
      }
      circuit->add(Cnot{controls[0], targets[0]});
    } else if (kind == "CU") {
      std::uint64_t pattern = 0;
      if (!(in >> pattern)) {
        throw ParseError(where + ": CU needs a control pattern");
      }
      const auto dim = Eigen::Index{1} << targets.size();
      circuit->add(ControlledUnitary{controls, pattern, targets,
                                     matrix_from(parse_reals(in), dim, line_no)});
    } else if (kind == "UCRY") {
      circuit->add(UniformlyControlledRy{controls, targets[0], parse_reals(in)});
    } else {
      throw ParseError(where + ": unknown gate '" + kind + "'");
    }
    in.clear();
    if (std::string rest; in >> rest) {
      throw ParseError(where + ": unexpected token '" + rest + "'");
    }
  }
  if (!circuit) {
    throw ParseError("empty circuit text");
  }
  return *std::move(circuit);
}

}  // namespace qpf::qsim
