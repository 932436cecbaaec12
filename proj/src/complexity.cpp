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

#include "qpf/complexity.hpp"

#include <cmath>
#include <cstdio>
#include <optional>

#include "qpf/errors.hpp"

namespace qpf::complexity {

std::string_view to_string(LogBase base) {
  switch (base) {
    case LogBase::Two:
      return "log2";
    case LogBase::E:
      return "ln";
    case LogBase::Ten:
      return "log10";
  }
  return "?";
}

LogBase parse_log_base(std::string_view text) {
  if (text == "2" || text == "log2") {
    return LogBase::Two;
  }
  if (text == "e" || text == "ln") {
    return LogBase::E;
  }
  if (text == "10" || text == "log10") {
    return LogBase::Ten;
  }
  throw InvalidInput("unknown log base '" + std::string(text) + "' (use 2, e or 10)");
}

double log_in(LogBase base, double x) {
  switch (base) {
    case LogBase::Two:
      return std::log2(x);
    case LogBase::E:
      return std::log(x);
    case LogBase::Ten:
      return std::log10(x);
  }
  return std::log(x);
}

void validate(const ComplexityParams& p) {
  if (!(p.s >= 1.0)) {
    throw InvalidInput("sparsity s must be >= 1");
  }
  if (!(p.k > 0.0)) {
    throw InvalidInput("condition parameter k must be > 0");
  }
  if (!(p.epsilon > 0.0 && p.epsilon <= 1.0)) {
    throw InvalidInput("epsilon must lie in (0, 1]");
  }
}

namespace {

void check_n(double n) {
  if (!(n >= 2.0) || !std::isfinite(n)) {
    throw InvalidInput("dimension n must be a finite value >= 2");
  }
}

}  // namespace

double t_classical(double n, const ComplexityParams& p) {
  check_n(n);
  validate(p);
  return n * p.s * p.k * log_in(p.log_eps_base, 1.0 / p.epsilon);
}

double t_quantum(double n, const ComplexityParams& p) {
  check_n(n);
  validate(p);
  return log_in(p.log_n_base, n) * p.s * p.s * p.k * p.k / p.epsilon;
}

double base_speed_ratio(double n, const ComplexityParams& classical,
                        const ComplexityParams& quantum) {
  return t_classical(n, classical) / t_quantum(n, quantum);
}

std::vector<CostSample> sweep(const ComplexityParams& classical, const ComplexityParams& quantum,
                              double constant_ratio, double n_min, double n_max, int steps) {
  if (!(constant_ratio > 0.0)) {
    throw InvalidInput("constant ratio must be positive");
  }
  if (steps < 1) {
    throw InvalidInput("steps must be >= 1");
  }
  if (!(n_min >= 2.0) || !(n_max >= n_min)) {
    throw InvalidInput("range must satisfy 2 <= n_min <= n_max");
  }
  std::vector<CostSample> rows;
  rows.reserve(static_cast<std::size_t>(steps));
  const double span = std::log(n_max / n_min);
  for (int i = 0; i < steps; ++i) {
    const double n =
        steps == 1 ? n_min
                   : (i == steps - 1 ? n_max : n_min * std::exp(span * i / (steps - 1)));
    rows.push_back({n, t_classical(n, classical), constant_ratio * t_quantum(n, quantum)});
  }
  return rows;
}

CrossoverReport find_crossover(const ComplexityParams& classical, const ComplexityParams& quantum,
                               double constant_ratio, double n_min, double n_max) {
  validate(classical);
  validate(quantum);
  if (!(constant_ratio > 0.0)) {
    throw InvalidInput("constant ratio must be positive");
  }
  // gap > 0: classical is cheaper. The crossover is the + to - sign change.
  auto gap = [&](double n) {
    return constant_ratio * t_quantum(n, quantum) - t_classical(n, classical);
  };

  // The gap is concave in n (log minus linear), so it has at most two
  // roots; a fine log grid brackets them.
  constexpr int kGridPerDecade = 64;
  const int cells =
      std::max(1, static_cast<int>(std::ceil(std::log10(n_max / n_min) * kGridPerDecade)));
  std::optional<std::pair<double, double>> bracket;
  double prev_n = n_min;
  double prev_gap = gap(n_min);
  for (int i = 1; i <= cells && !bracket; ++i) {
    const double n = i == cells ? n_max : n_min * std::pow(n_max / n_min, double(i) / cells);
    const double g = gap(n);
    if (prev_gap > 0.0 && g <= 0.0) {
      bracket = {prev_n, n};
    }
    prev_n = n;
    prev_gap = g;
  }
  if (!bracket) {
    const bool quantum_cheaper = gap(n_max) <= 0.0;
    throw NoCrossover(std::string("no crossover in [") + format_significant(n_min) + ", " +
                      format_significant(n_max) + "]: " +
                      (quantum_cheaper ? "scaled quantum cost is lower throughout"
                                       : "classical cost is lower throughout"));
  }

  auto [lo, hi] = *bracket;
  while ((hi - lo) > 1e-7 * lo) {
    const double mid = 0.5 * (lo + hi);
    (gap(mid) > 0.0 ? lo : hi) = mid;
  }

  CrossoverReport report;
  report.n_star = 0.5 * (lo + hi);
  report.constant_ratio = constant_ratio;
  report.classical_log_base = classical.log_eps_base;
  report.quantum_log_base = quantum.log_n_base;
  const int decades = static_cast<int>(std::ceil(std::log10(n_max / n_min)));
  report.samples = sweep(classical, quantum, constant_ratio, n_min, n_max, 8 * decades + 1);
  return report;
}

std::string format_significant(double value, int digits) {
  if (value == 0.0 || !std::isfinite(value)) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", value);
    return buf;
  }
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(value))));
  // Rounding can carry into the next decade (999999.7 -> 1000000).
  char probe[64];
  std::snprintf(probe, sizeof probe, "%.*e", digits - 1, value);
  const double rounded = std::strtod(probe, nullptr);
  const int rounded_exp = static_cast<int>(std::floor(std::log10(std::abs(rounded))));
  const int decimals = std::max(0, digits - 1 - std::max(exponent, rounded_exp));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<CostSample>& rows) {
  out << "n,classical_cost,quantum_cost_scaled\n";
  for (const auto& r : rows) {
    out << format_significant(r.n) << ',' << format_significant(r.classical_cost) << ','
        << format_significant(r.quantum_cost_scaled) << '\n';
  }
}

}  // namespace qpf::complexity
