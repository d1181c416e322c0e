#pragma once

// Position-momentum relation for pure Gaussian states:
//
//     D(rho_P || rho_P^E) + h_max(Q|Q') + h(P) >= log2(2 pi hbar)
//
// with the covariant (von Neumann) approximate position measurement, the
// Heisenberg microscope product form, the coarse-grained complementarity
// constant and the quadrature oracles that stand in for the continuum
// definitions. Everything is in bits.

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <numbers>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "mdr/core/types.hpp"
#include "mdr/entropy/alpha.hpp"
#include "mdr/entropy/divergence.hpp"
#include "mdr/quadrature.hpp"

namespace mdr::cv {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kLn2 = std::numbers::ln2;

/// Pure Gaussian system (position variance v_s) read out by a Gaussian meter
/// of position variance lambda * v_s.
struct GaussianModel {
  double v_s = 1.0;
  double lambda = 1.0;
  double hbar = 1.0;

  GaussianModel() = default;
  GaussianModel(double vs, double lam, double h = 1.0) : v_s(vs), lambda(lam), hbar(h) {
    if (!(v_s > 0.0) || !(lambda > 0.0) || !(hbar > 0.0))
      throw Error("GaussianModel: v_s, lambda and hbar must be positive");
  }

  [[nodiscard]] double v_p() const { return hbar * hbar / (4.0 * v_s); }
  [[nodiscard]] double v_m() const { return lambda * v_s; }
  /// 1 + 1/lambda
  [[nodiscard]] double spread() const { return 1.0 + 1.0 / lambda; }
};

inline double gaussian_diff_entropy(double variance) {
  if (!(variance > 0.0)) throw Error("gaussian_diff_entropy: variance must be positive");
  return 0.5 * std::log2(2.0 * kPi * std::numbers::e * variance);
}

inline double covariant_error(const GaussianModel& m) {
  return std::log2(2.0 * std::sqrt(2.0 * kPi * m.v_s / m.spread()));
}

inline double covariant_disturbance(const GaussianModel& m) {
  return -gaussian_diff_entropy(m.v_p()) + std::log2(m.hbar / 2.0 * std::sqrt(2.0 * kPi * m.spread() / m.v_s)) +
         1.0 / (2.0 * kLn2 * m.spread());
}

inline double cv_gap(double lambda) {
  if (!(lambda > 0.0)) throw Error("cv_gap: lambda must be positive");
  return 1.0 / (2.0 * kLn2) / (1.0 + 1.0 / lambda);
}

struct CvReport {
  double disturbance = 0;
  double error = 0;
  double h_p = 0;
  double bound = 0;
  double gap = 0;
};

inline CvReport cv_mdr_report(const GaussianModel& m) {
  CvReport r;
  r.disturbance = covariant_disturbance(m);
  r.error = covariant_error(m);
  r.h_p = gaussian_diff_entropy(m.v_p());
  r.bound = std::log2(2.0 * kPi * m.hbar);
  r.gap = r.disturbance + r.error + r.h_p - r.bound;
  return r;
}

inline double gaussian_pdf(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * variance)) / std::sqrt(2.0 * kPi * variance);
}

/// Disturbance of the covariant model by quadrature: the disturbed momentum
/// density is the convolution of |psi_hat|^2 with the meter's momentum
/// density, both evaluated on a uniform grid.
inline double covariant_disturbance_numeric(const GaussianModel& m, std::size_t n = 4096) {
  const double vp = m.v_p();
  const double vmeter = m.hbar * m.hbar / (4.0 * m.v_m());
  const double sp = std::sqrt(vp);
  const double sm = std::sqrt(vmeter);
  const quad::UniformGrid p(-10.0 * sp, 10.0 * sp, n);
  const quad::UniformGrid pm(-10.0 * sm, 10.0 * sm, n);
  double d = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    const double x = p.at(i);
    const double rho = gaussian_pdf(x, 0.0, vp);
    const double rho_e = quad::trapezoid(pm, [&](double y) { return gaussian_pdf(x + y, 0.0, vp) * gaussian_pdf(y, 0.0, vmeter); });
    if (rho > 0.0) d += p.weight(i) * rho * std::log2(rho / rho_e);
  }
  return d;
}

// Heisenberg microscope -------------------------------------------------------

struct MicroscopeResult {
  double d_p = 0;
  double product = 0;
  double bound = 0;
};

/// d_p = 2^{h(P)} 2^{D} / (4 pi), product = dq * d_p, bound = hbar / 2.
inline MicroscopeResult microscope_check(double dq, const GaussianModel& m, double disturbance_bits) {
  if (!(dq > 0.0)) throw Error("microscope_check: bin width must be positive");
  MicroscopeResult r;
  r.d_p = std::exp2(gaussian_diff_entropy(m.v_p()) + disturbance_bits) / (4.0 * kPi);
  r.product = dq * r.d_p;
  r.bound = m.hbar / 2.0;
  return r;
}

struct MicroscopeOptions {
  std::size_t momentum_points = 2049;
  std::size_t nodes_per_bin = 128;
  double bin_offset = 0.5;  // bins are [(k - offset) dq, (k + 1 - offset) dq)
};

/// Momentum disturbance of a projective (Lueders) position measurement with
/// bins of width dq on the model's Gaussian wave function. The post-measurement
/// momentum density is sum_k |FT(psi 1_k)|^2.
inline double microscope_disturbance(double dq, const GaussianModel& m, const MicroscopeOptions& opt = {}) {
  if (!(dq > 0.0)) throw Error("microscope_disturbance: bin width must be positive");
  const double ss = std::sqrt(m.v_s);
  const double vp = m.v_p();
  const double reach = 12.0 * ss;
  const auto kmin = static_cast<long>(std::floor(-reach / dq + opt.bin_offset));
  const auto kmax = static_cast<long>(std::ceil(reach / dq + opt.bin_offset));
  const auto base = quad::gauss_legendre(opt.nodes_per_bin);
  const double amp = std::pow(2.0 * kPi * m.v_s, -0.25);

  const quad::UniformGrid p(-10.0 * std::sqrt(vp), 10.0 * std::sqrt(vp), opt.momentum_points);
  std::vector<double> rho_e(p.n, 0.0);
  std::vector<std::complex<double>> acc(p.n);
  for (long k = kmin; k <= kmax; ++k) {
    const double a = (static_cast<double>(k) - opt.bin_offset) * dq;
    const auto rule = quad::mapped(base, a, a + dq);
    std::fill(acc.begin(), acc.end(), std::complex<double>(0.0, 0.0));
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double q = rule.nodes[j];
      const double f = rule.weights[j] * amp * std::exp(-q * q / (4.0 * m.v_s));
      if (f == 0.0) continue;
      for (std::size_t i = 0; i < p.n; ++i) acc[i] += std::polar(f, -p.at(i) * q / m.hbar);
    }
    for (std::size_t i = 0; i < p.n; ++i) rho_e[i] += std::norm(acc[i]) / (2.0 * kPi * m.hbar);
  }
  double d = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    const double rho = gaussian_pdf(p.at(i), 0.0, vp);
    if (rho > 0.0) d += p.weight(i) * rho * std::log2(rho / rho_e[i]);
  }
  return std::max(d, 0.0);
}

// Complementarity constant ----------------------------------------------------

namespace detail {

inline double sinc_kernel_top_eigenvalue(double a, std::size_t n) {
  const auto rule = quad::gauss_legendre(n);
  const auto ni = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd k(ni, ni);
  for (Eigen::Index i = 0; i < ni; ++i) {
    const double xi = rule.nodes[static_cast<std::size_t>(i)];
    const double wi = std::sqrt(rule.weights[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double xj = rule.nodes[static_cast<std::size_t>(j)];
      const double wj = std::sqrt(rule.weights[static_cast<std::size_t>(j)]);
      const double d = xi - xj;
      const double kern = d == 0.0 ? a / kPi : std::sin(a * d) / (kPi * d);
      k(i, j) = k(j, i) = wi * kern * wj;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

}  // namespace detail

struct ComplementarityResult {
  double c = 0;
  double refined = 0;  // same eigenvalue at twice the nodes
  double small_product_limit = 0;  // dq dp / (2 pi hbar)
};

/// Largest eigenvalue of sin(a(x - y)) / (pi (x - y)) on [-1, 1],
/// a = dq dp / (4 hbar): the maximal overlap of a position bin of width dq
/// with a momentum bin of width dp.
inline ComplementarityResult complementarity_constant_detail(double dq, double dp, double hbar = 1.0,
                                                             std::size_t nodes = 256) {
  if (!(dq > 0.0) || !(dp > 0.0) || !(hbar > 0.0))
    throw Error("complementarity_constant: widths and hbar must be positive");
  const double a = dq * dp / (4.0 * hbar);
  ComplementarityResult r;
  r.c = detail::sinc_kernel_top_eigenvalue(a, nodes);
  r.refined = detail::sinc_kernel_top_eigenvalue(a, 2 * nodes);
  r.small_product_limit = dq * dp / (2.0 * kPi * hbar);
  if (std::abs(r.c - r.refined) > 1e-8)
    throw Error("complementarity_constant: quadrature not converged (N vs 2N differ by " +
                std::to_string(std::abs(r.c - r.refined)) + ")");
  return r;
}

inline double complementarity_constant(double dq, double dp, double hbar = 1.0) {
  return complementarity_constant_detail(dq, dp, hbar).c;
}

// Differential conditional max-entropy ----------------------------------------

namespace detail {

template <class F>
double cond_max_entropy_on_grid(const quad::UniformGrid& x, const quad::UniformGrid& y, F&& at) {
  double mass = 0.0;
  double outer = 0.0;
  for (std::size_t j = 0; j < y.n; ++j) {
    double inner = 0.0;
    for (std::size_t i = 0; i < x.n; ++i) {
      const double v = at(i, j);
      if (v < 0.0) throw Error("diff_cond_max_entropy_numeric: negative density");
      mass += x.weight(i) * y.weight(j) * v;
      inner += x.weight(i) * std::sqrt(v);
    }
    outer += y.weight(j) * inner * inner;
  }
  if (std::abs(mass - 1.0) > 1e-6)
    throw Error("diff_cond_max_entropy_numeric: density integrates to " + std::to_string(mass));
  return std::log2(outer);
}

}  // namespace detail

/// h_max(X|Y) = log2 int dy (int dx sqrt(P(x, y)))^2 by composite trapezoid
/// on the product grid. `density(x, y)` must be normalized on the grid
/// within 1e-6.
template <std::invocable<double, double> F>
  requires(!std::is_convertible_v<F, const Eigen::MatrixXd&>)
double diff_cond_max_entropy_numeric(const quad::UniformGrid& x, const quad::UniformGrid& y, F&& density) {
  return detail::cond_max_entropy_on_grid(x, y, [&](std::size_t i, std::size_t j) { return density(x.at(i), y.at(j)); });
}

/// Tabulated version: values(i, j) = P(x_i, y_j).
inline double diff_cond_max_entropy_numeric(const quad::UniformGrid& x, const quad::UniformGrid& y,
                                            const Eigen::MatrixXd& values) {
  if (values.rows() != static_cast<Eigen::Index>(x.n) || values.cols() != static_cast<Eigen::Index>(y.n))
    throw Error("diff_cond_max_entropy_numeric: table does not match the grid");
  return detail::cond_max_entropy_on_grid(x, y, [&](std::size_t i, std::size_t j) {
    return values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  });
}

/// Q, Q' joint after the covariant interaction: |psi_S(q)|^2 |xi_M(q' - q)|^2.
inline double covariant_joint_density(const GaussianModel& m, double q, double qp) {
  return gaussian_pdf(q, 0.0, m.v_s) * gaussian_pdf(qp - q, 0.0, m.v_m());
}

/// Quadrature h_max(Q|Q') of the covariant joint; oracle for covariant_error.
inline double covariant_error_numeric(const GaussianModel& m, std::size_t n = 2048) {
  const double sq = std::sqrt(m.v_s);
  const double sqp = std::sqrt(m.v_s + m.v_m());
  const quad::UniformGrid q(-10.0 * sq, 10.0 * sq, n);
  const quad::UniformGrid qp(-10.0 * sqp, 10.0 * sqp, n);
  return diff_cond_max_entropy_numeric(q, qp, [&](double a, double b) { return covariant_joint_density(m, a, b); });
}

// Coarse graining ---------------------------------------------------------------

struct Gaussian1D {
  double mean = 0.0;
  double variance = 1.0;
};

/// Closed-form KL divergence in bits.
inline double gaussian_kl(const Gaussian1D& p, const Gaussian1D& q) {
  const double dm = p.mean - q.mean;
  return 0.5 * (std::log(q.variance / p.variance) + (p.variance + dm * dm) / q.variance - 1.0) / kLn2;
}

struct BinnedDistribution {
  double bin_width = 1.0;
  double origin = 0.0;
  std::vector<double> weights;
};

namespace detail {

/// P(X > x) without cancellation in either tail.
inline double upper_tail(const Gaussian1D& g, double x) {
  return 0.5 * std::erfc((x - g.mean) / std::sqrt(2.0 * g.variance));
}

inline double bin_mass(const Gaussian1D& g, double a, double b) {
  const double mid = 0.5 * (a + b);
  if (mid >= g.mean) return upper_tail(g, a) - upper_tail(g, b);
  const Gaussian1D mirror{-g.mean, g.variance};
  return upper_tail(mirror, -b) - upper_tail(mirror, -a);
}

}  // namespace detail

/// Bins of width `width` covering [-half_range, half_range]; the mass
/// beyond the edges is folded into the outer bins.
inline BinnedDistribution bin_gaussian(const Gaussian1D& g, double width, double half_range) {
  if (!(width > 0.0) || !(g.variance > 0.0)) throw Error("bin_gaussian: width and variance must be positive");
  const auto count = static_cast<std::size_t>(std::llround(2.0 * half_range / width));
  if (count == 0) throw Error("bin_gaussian: empty domain");
  BinnedDistribution b;
  b.bin_width = width;
  b.origin = -half_range;
  b.weights.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = b.origin + width * static_cast<double>(k);
    b.weights[k] = detail::bin_mass(g, a, a + width);
  }
  const double below = 1.0 - detail::upper_tail(g, b.origin);
  const double above = detail::upper_tail(g, -b.origin);
  b.weights.front() += below;
  b.weights.back() += above;
  return b;
}

struct BinnedLevel {
  int n = 0;
  double width = 1.0;
  double divergence = 0.0;
};

/// D(P_delta || Q_delta) at delta = 2^-n, n = 0..n_max, over a dyadic-aligned
/// domain that covers both densities to 10 standard deviations.
inline std::vector<BinnedLevel> binned_rel_entropy_convergence(const Gaussian1D& p, const Gaussian1D& q, int n_max) {
  if (n_max < 0) throw Error("binned_rel_entropy_convergence: n_max must be nonnegative");
  const double reach = std::max(std::abs(p.mean), std::abs(q.mean)) +
                       10.0 * std::sqrt(std::max(p.variance, q.variance));
  const double half_range = std::ceil(reach);
  std::vector<BinnedLevel> out;
  for (int n = 0; n <= n_max; ++n) {
    const double w = std::ldexp(1.0, -n);
    const auto bp = bin_gaussian(p, w, half_range);
    const auto bq = bin_gaussian(q, w, half_range);
    out.push_back({n, w, renyi_rel_entropy_classical(bp.weights, bq.weights, AlphaOrder::one())});
  }
  return out;
}

}  // namespace mdr::cv
