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

#include "qpf/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qpf/complexity.hpp"
#include "qpf/errors.hpp"
#include "qpf/grid.hpp"
#include "qpf/hhl.hpp"
#include "qpf/qsim.hpp"

namespace qpf::cli {

using nlohmann::json;

namespace {

struct NetworkSource {
  std::string fixture;
  std::string input;

  void attach(CLI::App& cmd) {
    auto* f = cmd.add_option("--fixture", fixture, "Built-in network (wscc9)");
    auto* i = cmd.add_option("--input", input, "Network JSON file");
    f->excludes(i);
  }

  grid::Network load() const {
    if (!input.empty()) {
      return grid::load_network(std::filesystem::path(input));
    }
    if (!fixture.empty()) {
      return grid::fixture(fixture);
    }
    throw InvalidInput("one of --fixture or --input is required");
  }
};

struct ComplexityFlags {
  double s = 6.0;
  double k = 0.1;
  std::optional<double> s_classical, s_quantum, k_classical, k_quantum;
  double eps_classical = 0.1;
  double eps_quantum = 0.37;
  double base_ratio = 34.0;
  std::string log_n_base = "2";
  std::string log_eps_base = "e";

  void attach(CLI::App& cmd) {
    cmd.add_option("--s", s, "Sparsity for both models")->capture_default_str();
    cmd.add_option("--k", k, "Condition parameter for both models")->capture_default_str();
    cmd.add_option("--s-classical", s_classical, "Sparsity, classical model only");
    cmd.add_option("--s-quantum", s_quantum, "Sparsity, quantum model only");
    cmd.add_option("--k-classical", k_classical, "Condition parameter, classical model only");
    cmd.add_option("--k-quantum", k_quantum, "Condition parameter, quantum model only");
    cmd.add_option("--eps-classical", eps_classical, "Classical accuracy")->capture_default_str();
    cmd.add_option("--eps-quantum", eps_quantum, "Quantum accuracy")->capture_default_str();
    cmd.add_option("--base-ratio", base_ratio, "Quantum per-unit cost factor")
        ->capture_default_str();
    cmd.add_option("--log-n-base", log_n_base, "Base of log(N) in the quantum model (2|e|10)")
        ->capture_default_str();
    cmd.add_option("--log-eps-base", log_eps_base,
                   "Base of log(1/eps) in the classical model (2|e|10)")
        ->capture_default_str();
  }

  complexity::ComplexityParams classical() const {
    complexity::ComplexityParams p;
    p.s = s_classical.value_or(s);
    p.k = k_classical.value_or(k);
    p.epsilon = eps_classical;
    p.log_n_base = complexity::parse_log_base(log_n_base);
    p.log_eps_base = complexity::parse_log_base(log_eps_base);
    complexity::validate(p);
    return p;
  }

  complexity::ComplexityParams quantum() const {
    complexity::ComplexityParams p = classical();
    p.s = s_quantum.value_or(s);
    p.k = k_quantum.value_or(k);
    p.epsilon = eps_quantum;
    complexity::validate(p);
    return p;
  }

  json echo() const {
    const auto c = classical();
    const auto q = quantum();
    return {{"classical", {{"s", c.s}, {"k", c.k}, {"epsilon", c.epsilon}}},
            {"quantum", {{"s", q.s}, {"k", q.k}, {"epsilon", q.epsilon}}},
            {"convention",
             {{"classical_log_eps", complexity::to_string(c.log_eps_base)},
              {"quantum_log_n", complexity::to_string(q.log_n_base)}}}};
  }
};

json to_json(const Eigen::VectorXd& v) { return std::vector<double>(v.begin(), v.end()); }

json to_json(const qsim::CircuitMetrics& m) {
  return {{"width", m.width}, {"depth", m.depth}, {"cnot_count", m.cnot_count}};
}

std::string fixed(double v, int precision = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(precision) << v;
  return s.str();
}

std::string vector_text(const Eigen::VectorXd& v, int precision = 4) {
  std::string s = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    s += (i ? ", " : "") + fixed(v(i), precision);
  }
  return s + "]";
}

void require_format(const std::string& format, std::initializer_list<std::string_view> allowed) {
  if (std::find(allowed.begin(), allowed.end(), format) == allowed.end()) {
    throw InvalidInput("format '" + format + "' is not supported by this command");
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

class Runner {
 public:
  Runner(std::ostream& out) : out_(out) {}

  void solve(const grid::Network& net, const std::string& method, const hhl::HHLConfig& config,
             const std::string& format) {
    require_format(format, {"json", "text"});
    const auto sys = grid::build_reduced_system(net);
    const auto theta = grid::solve_dc(sys);
    if (method == "classical") {
      if (format == "json") {
        emit({{"method", "classical"},
              {"bus_order", sys.bus_order},
              {"angles_rad", to_json(theta)}});
      } else {
        out_ << "DC power flow (classical), angles in radians\n";
        out_ << std::left << std::setw(6) << "bus" << "angle\n";
        for (std::size_t i = 0; i < sys.bus_order.size(); ++i) {
          out_ << std::left << std::setw(6) << sys.bus_order[i]
               << fixed(theta(static_cast<Eigen::Index>(i))) << '\n';
        }
      }
      return;
    }
    const auto r = hhl::run_hhl(sys, config);
    if (format == "json") {
      json cfg = {{"alpha", config.alpha},
                  {"t_override", config.t_override ? json(*config.t_override) : json(nullptr)},
                  {"c_override", config.c_override ? json(*config.c_override) : json(nullptr)},
                  {"readout", "exact"},
                  {"t", r.scaling.t},
                  {"c", r.scaling.c}};
      emit({{"method", "hhl"},
            {"bus_order", sys.bus_order},
            {"solution_unit", to_json(r.solution_unit)},
            {"success_probability", r.success_probability},
            {"recovered_norm", r.recovered_norm},
            {"fidelity", r.fidelity},
            {"residual_clock_leak", r.residual_clock_leak},
            {"metrics", to_json(r.metrics)},
            {"config", cfg}});
      return;
    }
    const Eigen::VectorXd quantum = r.recovered_norm * r.solution_unit;
    out_ << "Quantum simulation results (noiseless, alpha = " << config.alpha << ")\n";
    out_ << std::left << std::setw(20) << "Fidelity" << fixed(r.fidelity, 6) << '\n';
    out_ << std::left << std::setw(20) << "Probability" << fixed(r.success_probability, 6)
         << '\n';
    out_ << std::left << std::setw(20) << "Clock leak" << fixed(r.residual_clock_leak, 6) << '\n';
    out_ << std::left << std::setw(20) << "Classical solution" << vector_text(theta) << '\n';
    out_ << std::left << std::setw(20) << "Quantum solution" << vector_text(quantum) << '\n';
    out_ << "\nCircuit characteristics\n";
    out_ << std::left << std::setw(20) << "Circuit width" << r.metrics.width << '\n';
    out_ << std::left << std::setw(20) << "Circuit depth" << r.metrics.depth << '\n';
    out_ << std::left << std::setw(20) << "CNOT gates" << r.metrics.cnot_count << '\n';
  }

  void stats(const grid::Network& net, const std::string& format) {
    require_format(format, {"json", "text"});
    const auto st = grid::network_stats(net);
    if (format == "json") {
      emit({{"n", st.n}, {"s", st.s}, {"k_ratio", st.k_ratio},
            {"eigenvalues", to_json(st.eigenvalues)}});
      return;
    }
    out_ << std::left << std::setw(14) << "N" << st.n << '\n';
    out_ << std::left << std::setw(14) << "sparsity s" << st.s << '\n';
    out_ << std::left << std::setw(14) << "k (min/max)" << fixed(st.k_ratio, 6) << '\n';
    out_ << std::left << std::setw(14) << "eigenvalues" << vector_text(st.eigenvalues) << '\n';
  }

  void metrics(const grid::Network& net, const hhl::HHLConfig& config, const std::string& format,
               const std::string& dump_path) {
    require_format(format, {"json", "text"});
    const auto sys = grid::build_reduced_system(net);
    const auto hc = hhl::build_hhl_circuit(sys.b, sys.p, config);
    if (!dump_path.empty()) {
      std::ofstream dump(dump_path);
      if (!dump) {
        throw InvalidInput("cannot write " + dump_path);
      }
      dump << qsim::to_text(hc.circuit);
    }
    const auto m = qsim::metrics(hc.circuit);
    if (format == "json") {
      json j = to_json(m);
      j["alpha"] = config.alpha;
      j["high_level_gates"] = hc.circuit.size();
      emit(j);
      return;
    }
    out_ << std::left << std::setw(20) << "Circuit width" << m.width << '\n';
    out_ << std::left << std::setw(20) << "Circuit depth" << m.depth << '\n';
    out_ << std::left << std::setw(20) << "CNOT gates" << m.cnot_count << '\n';
  }

  void crossover(const ComplexityFlags& flags, double n_min, double n_max,
                 const std::string& format) {
    require_format(format, {"json", "text", "csv"});
    const auto report = complexity::find_crossover(flags.classical(), flags.quantum(),
                                                   flags.base_ratio, n_min, n_max);
    if (format == "csv") {
      complexity::write_csv(out_, report.samples);
      return;
    }
    if (format == "json") {
      json samples = json::array();
      for (const auto& s : report.samples) {
        samples.push_back(
            {{"n", s.n}, {"classical_cost", s.classical_cost},
             {"quantum_cost_scaled", s.quantum_cost_scaled}});
      }
      json j = flags.echo();
      j["n_star"] = report.n_star;
      j["constant_ratio"] = report.constant_ratio;
      j["samples"] = samples;
      emit(j);
      return;
    }
    const auto c = flags.classical();
    const auto q = flags.quantum();
    out_ << "crossover n* = " << complexity::format_significant(report.n_star) << '\n';
    out_ << "constant ratio = " << complexity::format_significant(report.constant_ratio) << '\n';
    out_ << "classical: N*s*k*" << complexity::to_string(c.log_eps_base) << "(1/eps) with s=" << c.s
         << " k=" << c.k << " eps=" << c.epsilon << '\n';
    out_ << "quantum:   " << complexity::to_string(q.log_n_base) << "(N)*s^2*k^2/eps with s="
         << q.s << " k=" << q.k << " eps=" << q.epsilon << '\n';
  }

  void sweep(const ComplexityFlags& flags, double n_min, double n_max, int steps,
             const std::string& format) {
    require_format(format, {"csv", "json"});
    const auto rows = complexity::sweep(flags.classical(), flags.quantum(), flags.base_ratio,
                                        n_min, n_max, steps);
    if (format == "csv") {
      complexity::write_csv(out_, rows);
      return;
    }
    json j = flags.echo();
    j["constant_ratio"] = flags.base_ratio;
    j["rows"] = json::array();
    for (const auto& r : rows) {
      j["rows"].push_back({r.n, r.classical_cost, r.quantum_cost_scaled});
    }
    emit(j);
  }

 private:
  void emit(const json& j) { out_ << j.dump(2) << '\n'; }

  std::ostream& out_;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and simulated-HHL DC power flow", "qpf"};
  app.require_subcommand(1);

  std::string out_path;
  bool verbose = false;
  app.add_option("--out", out_path, "Write results to this file instead of stdout");
  app.add_flag("--verbose", verbose, "Print a version banner on stderr");

  std::string format;
  NetworkSource source;
  std::string method = "classical";
  hhl::HHLConfig config;
  std::optional<double> t_override, c_override;
  std::string dump_path;
  ComplexityFlags cflags;
  double n_min = complexity::kSearchMin;
  double n_max = complexity::kSearchMax;
  double sweep_min = 10.0;
  double sweep_max = 2000.0;
  int steps = 200;

  auto add_hhl_flags = [&](CLI::App* cmd) {
    cmd->add_option("--alpha", config.alpha, "Clock register bits")
        ->check(CLI::Range(1, 12))
        ->capture_default_str();
    cmd->add_option("--t", t_override, "Evolution time override");
    cmd->add_option("--c", c_override, "Reciprocal-rotation constant override");
  };

  auto* solve = app.add_subcommand("solve", "Solve the DC power flow");
  source.attach(*solve);
  solve->add_option("--method", method, "classical | hhl")
      ->check(CLI::IsMember({"classical", "hhl"}))
      ->capture_default_str();
  add_hhl_flags(solve);
  solve->add_option("--format", format, "json | text")->default_str("json");

  auto* stats = app.add_subcommand("stats", "Reduced-system statistics (N, s, k)");
  source.attach(*stats);
  stats->add_option("--format", format, "json | text")->default_str("json");

  auto* metrics = app.add_subcommand("metrics", "Width, depth and CNOT count of the HHL circuit");
  source.attach(*metrics);
  add_hhl_flags(metrics);
  metrics->add_option("--dump", dump_path, "Write the circuit in text form to this path");
  metrics->add_option("--format", format, "json | text")->default_str("json");

  auto* cross = app.add_subcommand("crossover", "Classical/quantum cost crossover");
  cflags.attach(*cross);
  cross->add_option("--n-min", n_min, "Search range start")->capture_default_str();
  cross->add_option("--n-max", n_max, "Search range end")->capture_default_str();
  cross->add_option("--format", format, "json | text | csv")->default_str("json");

  auto* sweep = app.add_subcommand("sweep", "Cost curves over a log-spaced N grid (CSV)");
  cflags.attach(*sweep);
  sweep->add_option("--n-min", sweep_min, "Grid start")->capture_default_str();
  sweep->add_option("--n-max", sweep_max, "Grid end")->capture_default_str();
  sweep->add_option("--steps", steps, "Grid points")->capture_default_str();
  sweep->add_option("--format", format, "csv | json")->default_str("csv");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kUsage;
  }

  if (verbose) {
    err << "qpf " << kVersion << '\n';
  }
  config.t_override = t_override;
  config.c_override = c_override;

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) {
      err << "error: usage: cannot open " << out_path << '\n';
      return kUsage;
    }
  }
  std::ostream& sink = out_path.empty() ? out : file;

  auto pick = [&](const char* fallback) { return format.empty() ? std::string(fallback) : format; };

  try {
    Runner runner(sink);
    if (solve->parsed()) {
      runner.solve(source.load(), method, config, pick("json"));
    } else if (stats->parsed()) {
      runner.stats(source.load(), pick("json"));
    } else if (metrics->parsed()) {
      runner.metrics(source.load(), config, pick("json"), dump_path);
    } else if (cross->parsed()) {
      runner.crossover(cflags, n_min, n_max, pick("json"));
    } else if (sweep->parsed()) {
      runner.sweep(cflags, sweep_min, sweep_max, steps, pick("csv"));
    }
  } catch (const PostSelectionError& e) {
    err << "error: post-selection: " << one_line(e.what()) << '\n';
    return kPostSelection;
  } catch (const NumericalError& e) {
    err << "error: numerical: " << one_line(e.what()) << '\n';
    return kNumerical;
  } catch (const ParseError& e) {
    err << "error: parse: " << one_line(e.what()) << '\n';
    return kUsage;
  } catch (const InvalidInput& e) {
    err << "error: invalid-input: " << one_line(e.what()) << '\n';
    return kUsage;
  }
  return kOk;
}

}  // namespace qpf::cli
