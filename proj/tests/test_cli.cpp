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

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qpf/cli.hpp"
#include "qpf/grid.hpp"

using namespace qpf;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using nlohmann::json;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

// Error output is exactly one line with a machine-readable reason.
void check_error_line(const Outcome& o, const std::string& reason) {
  INFO(o.err);
  CHECK(o.out.empty());
  CHECK_THAT(o.err, StartsWith("error: " + reason + ": "));
  CHECK(o.err.back() == '\n');
  CHECK(std::count(o.err.begin(), o.err.end(), '\n') == 1);
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST_CASE("solve, classical") {
  const auto o = run({"solve", "--fixture", "wscc9", "--method", "classical"});
  REQUIRE(o.code == 0);
  CHECK(o.err.empty());
  const auto j = json::parse(o.out);
  CHECK(j["method"] == "classical");
  CHECK(j["bus_order"] == json({2, 3, 4, 5, 6, 7, 8, 9}));
  const auto sys = grid::build_reduced_system(grid::wscc9());
  const auto theta = grid::solve_dc(sys);
  REQUIRE(j["angles_rad"].size() == 8);
  for (int i = 0; i < 8; ++i) {
    CHECK(j["angles_rad"][i].get<double>() == theta(i));
  }

  const auto text = run({"solve", "--fixture", "wscc9", "--format", "text"});
  CHECK(text.code == 0);
  CHECK_THAT(text.out, ContainsSubstring("0.1710"));
}

TEST_CASE("solve, hhl") {
  const auto o = run({"solve", "--fixture", "wscc9", "--method", "hhl", "--alpha", "5"});
  REQUIRE(o.code == 0);
  const auto j = json::parse(o.out);
  for (const char* key : {"solution_unit", "success_probability", "recovered_norm", "fidelity",
                          "residual_clock_leak", "metrics", "config"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["metrics"]["width"] == 9);
  CHECK(j["metrics"]["depth"].get<int>() > 0);
  CHECK(j["metrics"]["cnot_count"].get<int>() > 0);
  CHECK(j["config"]["alpha"] == 5);
  CHECK(j["config"]["readout"] == "exact");
  CHECK(j["config"]["t_override"].is_null());
  CHECK(j["solution_unit"].size() == 8);
  const double f = j["fidelity"].get<double>();
  CHECK(f > 0.0);
  CHECK(f <= 1.0);

  const auto text =
      run({"solve", "--fixture", "wscc9", "--method", "hhl", "--format", "text"});
  CHECK(text.code == 0);
  CHECK_THAT(text.out, ContainsSubstring("Circuit width       9"));
}

TEST_CASE("identical invocations give identical bytes") {
  const std::vector<std::vector<std::string>> cmds = {
      {"solve", "--fixture", "wscc9", "--method", "hhl"},
      {"solve", "--fixture", "wscc9", "--method", "classical", "--format", "text"},
      {"stats", "--fixture", "wscc9"},
      {"metrics", "--fixture", "wscc9"},
      {"crossover"},
      {"sweep", "--steps", "50"},
  };
  for (const auto& cmd : cmds) {
    const auto a = run(cmd);
    const auto b = run(cmd);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.err.empty());
  }
}

TEST_CASE("stats and metrics") {
  const auto s = json::parse(run({"stats", "--fixture", "wscc9"}).out);
  CHECK(s["n"] == 8);
  CHECK(s["s"] == 4);
  CHECK(s["k_ratio"].get<double>() == Catch::Approx(0.0169147).epsilon(0).margin(1e-6));

  const auto dump = std::filesystem::temp_directory_path() / "qpf_test_dump.txt";
  const auto m = run({"metrics", "--fixture", "wscc9", "--dump", dump.string()});
  REQUIRE(m.code == 0);
  const auto j = json::parse(m.out);
  CHECK(j["width"] == 9);
  std::ifstream in(dump);
  std::string first;
  std::getline(in, first);
  CHECK(first == "QUBITS 9");
  std::filesystem::remove(dump);
}

TEST_CASE("crossover report echoes its convention") {
  const auto o = run({"crossover", "--s", "6", "--k", "0.1", "--eps-classical", "0.1",
                      "--eps-quantum", "0.37", "--base-ratio", "34"});
  REQUIRE(o.code == 0);
  const auto j = json::parse(o.out);
  const double n_star = j["n_star"].get<double>();
  CHECK(n_star >= 100.0);
  CHECK(n_star <= 300.0);
  CHECK(j["constant_ratio"] == 34.0);
  CHECK(j["convention"]["classical_log_eps"] == "ln");
  CHECK(j["convention"]["quantum_log_n"] == "log2");
  CHECK(j["classical"]["s"] == 6.0);
  CHECK(j["quantum"]["epsilon"] == 0.37);
  CHECK_FALSE(j["samples"].empty());

  const auto text = run({"crossover", "--format", "text"});
  CHECK_THAT(text.out, ContainsSubstring("ln(1/eps)"));
  CHECK_THAT(text.out, ContainsSubstring("log2(N)"));

  const auto split = json::parse(run({"crossover", "--k-quantum", "0.2"}).out);
  CHECK(split["classical"]["k"] == 0.1);
  CHECK(split["quantum"]["k"] == 0.2);

  const auto base10 = json::parse(run({"crossover", "--log-n-base", "10"}).out);
  CHECK(base10["convention"]["quantum_log_n"] == "log10");
}

TEST_CASE("sweep csv") {
  const auto o = run({"sweep", "--n-min", "10", "--n-max", "2000", "--steps", "5"});
  REQUIRE(o.code == 0);
  CHECK_THAT(o.out, StartsWith("n,classical_cost,quantum_cost_scaled\n10.0000,"));
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 6);
}

TEST_CASE("--out and --verbose") {
  const auto path = std::filesystem::temp_directory_path() / "qpf_test_out.json";
  const auto o = run({"--out", path.string(), "--verbose", "stats", "--fixture", "wscc9"});
  CHECK(o.code == 0);
  CHECK(o.out.empty());
  CHECK(o.err == std::string("qpf ") + cli::kVersion + "\n");
  std::ifstream in(path);
  std::stringstream body;
  body << in.rdbuf();
  CHECK(json::parse(body.str())["n"] == 8);
  std::filesystem::remove(path);
}

TEST_CASE("input files") {
  const auto good = temp_file("qpf_two_bus.json", R"({"base_mva": 100.0,
    "buses": [{"id": 1, "slack": true, "p_pu": 0.0}, {"id": 2, "slack": false, "p_pu": 1.0}],
    "branches": [{"from": 1, "to": 2, "x_pu": 0.1}]})");
  const auto o = run({"solve", "--input", good.string()});
  REQUIRE(o.code == 0);
  CHECK(json::parse(o.out)["angles_rad"][0].get<double>() == Catch::Approx(0.1));

  const auto bad = temp_file("qpf_bad.json", "{ not json");
  check_error_line(run({"solve", "--input", bad.string()}), "parse");

  const auto islands = temp_file("qpf_islands.json", R"({"base_mva": 100.0,
    "buses": [{"id": 1, "slack": true, "p_pu": 0.0}, {"id": 2, "slack": false, "p_pu": 1.0},
              {"id": 3, "slack": false, "p_pu": 1.0}],
    "branches": [{"from": 1, "to": 2, "x_pu": 0.1}]})");
  check_error_line(run({"solve", "--input", islands.string()}), "invalid-input");
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
  std::filesystem::remove(islands);
}

TEST_CASE("error paths and exit codes") {
  SECTION("usage") {
    check_error_line(run({}), "usage");
    check_error_line(run({"frobnicate"}), "usage");
    check_error_line(run({"solve", "--fixture", "wscc9", "--bogus"}), "usage");
    check_error_line(run({"solve", "--fixture", "wscc9", "--method", "magic"}), "usage");
    check_error_line(run({"solve", "--fixture", "wscc9", "--alpha", "13"}), "usage");
    check_error_line(run({"solve", "--fixture", "wscc9", "--input", "x.json"}), "usage");
    check_error_line(run({"sweep", "--steps", "many"}), "usage");
    CHECK(run({"frobnicate"}).code == cli::kUsage);
  }
  SECTION("invalid input") {
    check_error_line(run({"solve"}), "invalid-input");
    check_error_line(run({"solve", "--fixture", "ieee14"}), "invalid-input");
    check_error_line(run({"solve", "--fixture", "wscc9", "--format", "csv"}), "invalid-input");
    check_error_line(run({"crossover", "--eps-quantum", "0"}), "invalid-input");
    check_error_line(run({"crossover", "--log-n-base", "3"}), "invalid-input");
    check_error_line(run({"solve", "--fixture", "wscc9", "--method", "hhl", "--t", "-1"}),
                     "invalid-input");
    CHECK(run({"solve"}).code == cli::kUsage);
  }
  SECTION("missing file") {
    const auto o = run({"solve", "--input", "/nonexistent/qpf.json"});
    CHECK(o.code == cli::kUsage);
    CHECK(std::count(o.err.begin(), o.err.end(), '\n') == 1);
  }
  SECTION("numerical") {
    const auto o = run({"crossover", "--base-ratio", "1e9"});
    CHECK(o.code == cli::kNumerical);
    check_error_line(o, "numerical");
    CHECK_THAT(o.err, ContainsSubstring("no crossover"));
  }
  SECTION("post-selection") {
    const auto o = run({"solve", "--fixture", "wscc9", "--method", "hhl", "--c", "1e-9"});
    CHECK(o.code == cli::kPostSelection);
    check_error_line(o, "post-selection");
  }
  SECTION("help") {
    const auto o = run({"--help"});
    CHECK(o.code == 0);
    CHECK_THAT(o.out, ContainsSubstring("crossover"));
  }
}
