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

// Asymptotic cost models for sparse linear solves:
//   classical (conjugate gradient):  N s k log(1/eps)
//   quantum (HHL):                   log(N) s^2 k^2 / eps
// Costs are unitless model units.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qpf::complexity {

enum class LogBase { Two, E, Ten };

std::string_view to_string(LogBase base);
/// Accepts "2", "e", "ln", "10".
LogBase parse_log_base(std::string_view text);
double log_in(LogBase base, double x);

struct ComplexityParams {
  double s = 1.0;
  double k = 1.0;
  double epsilon = 0.1;
  LogBase log_n_base = LogBase::Two;  // quantum log(N)
  LogBase log_eps_base = LogBase::E;  // classical log(1/eps)
};

/// Throws InvalidInput unless s >= 1, k > 0 and 0 < epsilon <= 1.
void validate(const ComplexityParams& p);

double t_classical(double n, const ComplexityParams& p);
double t_quantum(double n, const ComplexityParams& p);

/// t_classical / t_quantum at dimension n: the per-unit slowdown the quantum
/// side can carry and still break even at n.
double base_speed_ratio(double n, const ComplexityParams& classical,
                        const ComplexityParams& quantum);

struct CostSample {
  double n;
  double classical_cost;
  double quantum_cost_scaled;
};

struct CrossoverReport {
  double n_star = 0.0;
  double constant_ratio = 0.0;
  LogBase classical_log_base = LogBase::E;
  LogBase quantum_log_base = LogBase::Two;
  std::vector<CostSample> samples;
};

inline constexpr double kSearchMin = 2.0;
inline constexpr double kSearchMax = 1e7;

/// Dimension past which constant_ratio * t_quantum drops below t_classical,
/// by bisection to 1e-6 relative tolerance. Throws NoCrossover when no such
/// sign change exists in [n_min, n_max].
CrossoverReport find_crossover(const ComplexityParams& classical, const ComplexityParams& quantum,
                               double constant_ratio, double n_min = kSearchMin,
                               double n_max = kSearchMax);

/// Log-spaced grid over [n_min, n_max]; steps == 1 yields the single point n_min.
std::vector<CostSample> sweep(const ComplexityParams& classical, const ComplexityParams& quantum,
                              double constant_ratio, double n_min, double n_max, int steps);

/// Header `n,classical_cost,quantum_cost_scaled`, 6 significant digits.
void write_csv(std::ostream& out, const std::vector<CostSample>& rows);
std::string format_significant(double value, int digits = 6);

}  // namespace qpf::complexity
