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

#include "qpf/hhl.hpp"

#include <bit>
#include <numeric>

namespace qpf::hhl {

using qsim::Circuit;
using qsim::Qubit;

EigenDecomposition decompose(const Eigen::MatrixXd& b) {
  if (b.rows() != b.cols() || b.rows() == 0) {
    throw InvalidInput("matrix must be square and non-empty");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigendecomposition failed");
  }
  if (!(es.eigenvalues().minCoeff() > 0.0)) {
    throw NumericalError("matrix has a non-positive eigenvalue");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

SpectralScaling choose_scaling(const EigenDecomposition& eig, int alpha) {
  if (alpha < 1 || alpha > 20) {
    throw InvalidInput("alpha must be in [1, 20]");
  }
  if (eig.size() == 0 || !(eig.lambdas.minCoeff() > 0.0)) {
    throw NumericalError("scaling needs strictly positive eigenvalues");
  }
  const double levels = std::ldexp(1.0, alpha);
  SpectralScaling s;
  s.alpha = alpha;
  s.t = 2.0 * M_PI * (levels - 1.0) / (levels * eig.lambdas.maxCoeff());
  s.c = 2.0 * M_PI / (levels * s.t);
  return s;
}

std::vector<Qubit> RegisterLayout::solution_qubits() const {
  std::vector<Qubit> q(static_cast<std::size_t>(beta));
  std::iota(q.begin(), q.end(), 0);
  return q;
}

std::vector<Qubit> RegisterLayout::clock_qubits() const {
  std::vector<Qubit> q(static_cast<std::size_t>(alpha));
  std::iota(q.begin(), q.end(), beta);
  return q;
}

Circuit inverse_qft(int width, const std::vector<Qubit>& qubits) {
  Circuit qft(width);
  const int n = static_cast<int>(qubits.size());
  for (int j = n - 1; j >= 0; --j) {
    const Qubit target = qubits[static_cast<std::size_t>(j)];
    qft.add(qsim::SingleQubit{target, qsim::hadamard()});
    for (int k = j - 1; k >= 0; --k) {
      const double angle = 2.0 * M_PI / std::ldexp(1.0, j - k + 1);
      qft.add(qsim::ControlledUnitary{{qubits[static_cast<std::size_t>(k)]}, 1, {target},
                                      qsim::phase(angle)});
    }
  }
  for (int i = 0; i < n / 2; ++i) {
    const Qubit a = qubits[static_cast<std::size_t>(i)];
    const Qubit b = qubits[static_cast<std::size_t>(n - 1 - i)];
    qft.add(qsim::Cnot{a, b});
    qft.add(qsim::Cnot{b, a});
    qft.add(qsim::Cnot{a, b});
  }
  return qft.inverse();
}

Eigen::MatrixXcd evolution(const EigenDecomposition& eig, double tau) {
  const Eigen::VectorXcd phases =
      (eig.lambdas * tau).unaryExpr([](double x) { return std::polar(1.0, x); });
  const Eigen::MatrixXcd v = eig.vectors.cast<qsim::Complex>();
  return v * phases.asDiagonal() * v.adjoint();
}

Circuit build_qpe(const EigenDecomposition& eig, const SpectralScaling& scaling,
                  const RegisterLayout& layout) {
  if ((Eigen::Index{1} << layout.beta) != eig.size()) {
    throw InvalidInput("eigendecomposition size does not match the solution register");
  }
  Circuit qpe(layout.width());
  for (Qubit q : layout.clock_qubits()) {
    qpe.add(qsim::SingleQubit{q, qsim::hadamard()});
  }
  for (int k = 0; k < layout.alpha; ++k) {
    qpe.add(qsim::ControlledUnitary{{layout.clock(k)}, 1, layout.solution_qubits(),
                                    evolution(eig, scaling.t * std::ldexp(1.0, k))});
  }
  qpe.append(inverse_qft(layout.width(), layout.clock_qubits()));
  return qpe;
}

qsim::UniformlyControlledRy build_reciprocal_rotation(const SpectralScaling& scaling,
                                                       const RegisterLayout& layout) {
  qsim::UniformlyControlledRy g;
  g.controls = layout.clock_qubits();
  g.target = layout.ancilla();
  g.angles.assign(std::size_t{1} << layout.alpha, 0.0);
  for (std::size_t m = 1; m < g.angles.size(); ++m) {
    const double ratio = scaling.c / scaling.clock_eigenvalue(m);
    g.angles[m] = 2.0 * std::asin(std::min(1.0, ratio));
  }
  return g;
}

HHLCircuit build_hhl_circuit(const Eigen::MatrixXd& b, const Eigen::VectorXd& p,
                             const HHLConfig& config) {
  if (b.rows() != p.size()) {
    throw InvalidInput("matrix and right-hand side sizes differ");
  }
  const double p_norm = p.norm();
  if (!(p_norm > 0.0)) {
    throw InvalidInput("right-hand side is zero");
  }
  const auto n = static_cast<std::uint64_t>(b.rows());
  const int beta = std::max(1, static_cast<int>(std::bit_width(n - 1)));
  const auto dim = Eigen::Index{1} << beta;

  // Pad with lambda_max on the unused subspace so the clock scaling is
  // unchanged; p has no weight there.
  const auto base = decompose(b);
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(dim, dim);
  padded.topLeftCorner(b.rows(), b.cols()) = b;
  for (Eigen::Index i = b.rows(); i < dim; ++i) {
    padded(i, i) = base.lambdas.maxCoeff();
  }

  HHLCircuit out{Circuit(beta + config.alpha + 1), {beta, config.alpha}, {}, decompose(padded),
                 Eigen::VectorXd::Zero(dim), p_norm};
  out.p_unit.head(p.size()) = p / p_norm;

  out.scaling = choose_scaling(out.eig, config.alpha);
  if (config.t_override) {
    if (!(*config.t_override > 0.0)) {
      throw InvalidInput("t must be positive");
    }
    out.scaling.t = *config.t_override;
    out.scaling.c = out.scaling.clock_eigenvalue(1);
    const double top = out.scaling.clock_position(out.eig.lambdas.maxCoeff());
    if (top > std::ldexp(1.0, config.alpha) - 1.0 + 1e-9) {
      throw InvalidInput("t maps the largest eigenvalue past the top clock value");
    }
  }
  if (config.c_override) {
    if (!(*config.c_override > 0.0) ||
        *config.c_override > out.scaling.clock_eigenvalue(1) * (1.0 + 1e-12)) {
      throw InvalidInput("c must lie in (0, smallest nonzero clock eigenvalue]");
    }
    out.scaling.c = *config.c_override;
  }

  const auto qpe = build_qpe(out.eig, out.scaling, out.layout);
  const auto solution = out.layout.solution_qubits();
  out.circuit.append(qsim::prepare_state(out.p_unit), solution);
  out.circuit.append(qpe);
  out.circuit.add(build_reciprocal_rotation(out.scaling, out.layout));
  out.circuit.append(qpe.inverse());
  return out;
}

HHLResult run_hhl(const Eigen::MatrixXd& b, const Eigen::VectorXd& p,
                  const Eigen::VectorXd& reference, const HHLConfig& config) {
  const auto hc = build_hhl_circuit(b, p, config);
  const auto& layout = hc.layout;

  const auto final_state = qsim::apply_circuit(qsim::StateVector(layout.width()), hc.circuit);
  const auto post = qsim::post_select(final_state, layout.ancilla(), 1, 1e-12);

  // Clock = 0, ancilla = 1 block holds the solution amplitudes.
  const auto dim = Eigen::Index{1} << layout.beta;
  const auto ancilla_bit = Eigen::Index{1} << layout.ancilla();
  Eigen::VectorXcd x(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    x(i) = post.state[ancilla_bit | i];
  }
  const double kept = x.squaredNorm();
  if (!(kept > 1e-24)) {
    throw PostSelectionError("no amplitude left on clock |0> after uncompute");
  }

  HHLResult r;
  r.config = config;
  r.scaling = hc.scaling;
  r.residual_clock_leak = std::max(0.0, 1.0 - kept);
  r.success_probability = post.probability;
  r.recovered_norm = std::sqrt(post.probability) / hc.scaling.c * hc.p_norm;

  x /= std::sqrt(kept);
  Eigen::Index largest = 0;
  x.cwiseAbs().maxCoeff(&largest);
  x *= std::conj(x(largest)) / std::abs(x(largest));
  r.solution_unit = x.head(b.rows()).real();
  r.solution_unit /= r.solution_unit.norm();

  r.fidelity = fidelity(reference, r.solution_unit);
  if (config.compute_metrics) {
    r.metrics = qsim::metrics(hc.circuit);
  } else {
    r.metrics.width = layout.width();
  }
  return r;
}

HHLResult run_hhl(const grid::ReducedSystem& sys, const HHLConfig& config) {
  return run_hhl(sys.b, sys.p, grid::solve_dc(sys), config);
}

double epsilon_from_fidelity(double f) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw InvalidInput("fidelity must lie in [0, 1]");
  }
  return std::sqrt(2.0 * (1.0 - std::sqrt(f)));
}

}  // namespace qpf::hhl
