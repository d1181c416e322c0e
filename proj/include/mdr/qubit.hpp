#pragma once

// Variable-strength X measurement of a qubit through a CNOT onto a probe
// prepared in cos(theta/2)|0> + sin(theta/2)|1>, followed by a
// standard-basis readout of the probe.
//
// theta = 0 is a projective X measurement, theta = pi/2 leaves S untouched
// and M uncorrelated.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mdr/core/operations.hpp"
#include "mdr/core/types.hpp"
#include "mdr/entropy/conditional.hpp"
#include "mdr/measures.hpp"

namespace mdr::qubit {

inline constexpr double kHalfPi = std::numbers::pi / 2.0;

inline const SystemLayout& system_layout() {
  static const SystemLayout s("S", 2);
  return s;
}

inline void require_theta(double theta) {
  if (!(theta >= 0.0 && theta <= kHalfPi)) throw Error("weak measurement: theta must lie in [0, pi/2]");
}

/// (I + r.sigma)/2.
inline DensityOperator bloch_state(double rx, double ry, double rz) {
  if (rx * rx + ry * ry + rz * rz > 1.0 + tol::psd) throw Error("bloch_state: |r| > 1");
  Matrix m(2, 2);
  m << Complex(1 + rz, 0), Complex(rx, -ry), Complex(rx, ry), Complex(1 - rz, 0);
  return {system_layout(), m * 0.5};
}

inline Povm z_basis() { return Povm::from_basis(system_layout(), Matrix::Identity(2, 2)); }

/// |+>, |->.
inline Povm x_basis() {
  Matrix b(2, 2);
  const double h = 1.0 / std::sqrt(2.0);
  b << h, h, h, -h;
  return Povm::from_basis(system_layout(), b);
}

namespace detail {

inline Matrix plus_projector() { return x_basis().elements()[0]; }
inline Matrix minus_projector() { return x_basis().elements()[1]; }

inline Vector probe(double theta) {
  Vector v(2);
  v << std::cos(theta / 2), std::sin(theta / 2);
  return v;
}

}  // namespace detail

/// Kraus pair on S with the readout recorded in a classical bit M:
/// K_0 = c P+ + s P-, K_1 = s P+ + c P-, A_m = K_m (x) |m>.
inline QuantumChannel build_channel(double theta) {
  require_theta(theta);
  const double c = std::cos(theta / 2);
  const double s = std::sin(theta / 2);
  const Matrix pp = detail::plus_projector();
  const Matrix pm = detail::minus_projector();
  const Matrix k0 = c * pp + s * pm;
  const Matrix k1 = s * pp + c * pm;
  std::vector<Matrix> kraus;
  kraus.push_back(tensor(k0, Matrix(basis_vector(2, 0))));
  kraus.push_back(tensor(k1, Matrix(basis_vector(2, 1))));
  return {system_layout(), SystemLayout({"S", "M"}, {2, 2}), kraus};
}

/// The CNOT isometry before the probe is read out, V = P+ (x) |phi> + P- (x) sigma_x|phi>.
inline QuantumChannel coherent_channel(double theta) {
  require_theta(theta);
  const Vector phi = detail::probe(theta);
  Vector flipped(2);
  flipped << phi(1), phi(0);
  const Matrix v = tensor(detail::plus_projector(), Matrix(phi)) + tensor(detail::minus_projector(), Matrix(flipped));
  return {system_layout(), SystemLayout({"S", "M"}, {2, 2}), {v}};
}

inline double analytic_error(double rx, double theta) {
  return std::log2(1.0 + std::sqrt(std::max(0.0, 1.0 - rx * rx)) * std::sin(theta));
}

inline double analytic_disturbance(double rz, double theta) {
  const double s = std::sin(theta);
  auto term = [&](double r) {
    const double num = 1.0 + r;
    return num <= 0.0 ? 0.0 : num / 2.0 * std::log2(num / (1.0 + r * s));
  };
  return term(rz) + term(-rz);
}

inline double analytic_entropy(double rz) {
  auto term = [](double v) { return v <= 0.0 ? 0.0 : v / 2.0 * std::log2(v); };
  return 1.0 - term(1.0 + rz) - term(1.0 - rz);
}

inline MdrScenario scenario(double r, double theta, AlphaOrder alpha = AlphaOrder::one()) {
  return {bloch_state(0, 0, r), x_basis(), z_basis(), build_channel(theta), alpha};
}

/// Evenly spaced samples of [lo, hi] including both ends.
inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  if (n == 0) throw Error("linspace: need at least one point");
  std::vector<double> v(n, lo);
  for (std::size_t i = 1; i < n; ++i) v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) v.back() = hi;
  return v;
}

/// Branch states |phi_x> of the probe, read off the coherent channel as
/// (<x| (x) I) V |x>.
inline std::vector<Vector> probe_branches(double theta) {
  const Matrix v = coherent_channel(theta).kraus().front();
  std::vector<Vector> out;
  for (Eigen::Index k = 0; k < 2; ++k) {
    Vector ket(2);
    ket << 1.0 / std::sqrt(2.0), (k == 0 ? 1.0 : -1.0) / std::sqrt(2.0);
    const Vector full = v * ket;
    Vector branch = Vector::Zero(2);
    for (Eigen::Index m = 0; m < 2; ++m) branch(m) = ket(0) * full(m) + ket(1) * full(2 + m);
    out.push_back(branch);
  }
  return out;
}

/// Max-entropy objective evaluated at sigma = |chi><chi|,
/// |chi> ~ sum_x sqrt(p_x) |phi_x>, on rho_XM from the coherent channel.
inline double chi_lower_bound(double rx, double ry, double rz, double theta) {
  const auto rho = bloch_state(rx, ry, rz);
  const MdrScenario sc(rho, x_basis(), z_basis(), coherent_channel(theta), AlphaOrder::one());
  const auto xm = x_meter_state(sc).embed("X");
  const auto p = outcome_distribution(rho, x_basis());
  const auto phi = probe_branches(theta);
  Vector chi = Vector::Zero(2);
  for (std::size_t x = 0; x < 2; ++x) chi += std::sqrt(p[x]) * phi[x];
  chi.normalize();
  return conditional_objective(xm, "M", pure_state(SystemLayout("M", 2), chi), AlphaOrder::half());
}

/// Predictive error with the probe kept coherent (quantum M).
inline EntropyResult quantum_meter_error(double rx, double ry, double rz, double theta) {
  const MdrScenario sc(bloch_state(rx, ry, rz), x_basis(), z_basis(), coherent_channel(theta), AlphaOrder::one());
  return predictive_error_result(sc);
}

struct ValidationSummary {
  double closed_form_deviation = 0.0;  // disturbance, entropy, classical-M error
  double solver_deviation = 0.0;       // quantum-M error and the chi candidate
  std::size_t points = 0;
  bool converged = true;
};

/// Numeric pipeline against the closed forms on rho = (I + r sigma_z)/2,
/// r in [0, 1], theta in [0, pi/2].
inline ValidationSummary validate_analytic_vs_numeric(std::size_t r_steps, std::size_t theta_steps,
                                                      bool include_solver = true) {
  ValidationSummary v;
  for (double theta : linspace(0.0, kHalfPi, theta_steps)) {
    for (double r : linspace(0.0, 1.0, r_steps)) {
      const auto sc = scenario(r, theta);
      const double e = analytic_error(0.0, theta);
      v.closed_form_deviation = std::max({v.closed_form_deviation,
                                          std::abs(disturbance(sc) - analytic_disturbance(r, theta)),
                                          std::abs(entropy_term(sc).value - analytic_entropy(r)),
                                          std::abs(predictive_error(sc) - e)});
      if (include_solver) {
        const auto q = quantum_meter_error(0.0, 0.0, r, theta);
        v.converged = v.converged && q.converged;
        v.solver_deviation = std::max({v.solver_deviation, std::abs(q.value - e),
                                       std::abs(chi_lower_bound(0.0, 0.0, r, theta) - e)});
      }
      ++v.points;
    }
  }
  return v;
}

/// rho_SR = sum_z p_z |z><z| (x) |z><z| with p_0 = (1 + r)/2, memory-assisted at alpha = 1.
inline MdrReport memory_scenario(double r, double theta) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error("memory_scenario: r must lie in [0, 1]");
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = (1.0 + r) / 2.0;
  m(3, 3) = (1.0 - r) / 2.0;
  const DensityOperator rho(SystemLayout({"S", "R"}, {2, 2}), m);
  const MdrScenario sc(rho, x_basis(), z_basis(), build_channel(theta), AlphaOrder::one());
  return mdr_report(sc, MdrVariant::MemoryAssisted);
}

struct Fig2Row {
  double theta = 0;
  double r = 0;
  double error = 0;
  double disturbance = 0;
  double entropy = 0;
  double gap = 0;
};

/// Numeric (classical M, alpha = 1) reports over theta in [0, pi/2] and r in [0, 1], theta-major.
inline std::vector<Fig2Row> scan_fig2(std::size_t theta_steps, std::size_t r_steps) {
  if (theta_steps == 0 || r_steps == 0) throw Error("scan_fig2: step counts must be positive");
  std::vector<Fig2Row> rows;
  rows.reserve(theta_steps * r_steps);
  for (double theta : linspace(0.0, kHalfPi, theta_steps))
    for (double r : linspace(0.0, 1.0, r_steps)) {
      const auto rep = mdr_report(scenario(r, theta), MdrVariant::Classical);
      rows.push_back({theta, r, rep.error, rep.disturbance, rep.entropy_term, rep.gap});
    }
  return rows;
}

}  // namespace mdr::qubit
