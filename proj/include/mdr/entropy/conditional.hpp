#pragma once

// Conditional Renyi entropies H_alpha(A|B) = max_eta -D_alpha(rho_AB || I_A (x) eta_B),
// together with the min- and max-entropy special cases.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "mdr/core/linalg.hpp"
#include "mdr/core/operations.hpp"
#include "mdr/core/types.hpp"
#include "mdr/entropy/alpha.hpp"
#include "mdr/entropy/divergence.hpp"
#include "mdr/entropy/operator_bound_sdp.hpp"

namespace mdr {

/// Optimizer-based entropy value in bits.
struct EntropyResult {
  double value = 0.0;
  bool converged = true;
  int iterations = 0;
  /// Conditioning state attaining the reported optimum, when available.
  std::optional<DensityOperator> certificate;
};

inline constexpr double kOptTolerance = 1e-9;

namespace detail {

/// rho reordered to (A..., B) with B = condition label.
struct Bipartition {
  Matrix rho;  // on A (x) B
  Eigen::Index da = 1;
  Eigen::Index db = 1;
  SystemLayout a_layout;
  SystemLayout b_layout;
};

inline Bipartition bipartition(const DensityOperator& rho, const std::string& condition_on) {
  (void)rho.layout().index_of(condition_on);
  auto order = complement(rho.layout(), {condition_on});
  const auto a_layout = rho.layout().select(order);
  order.push_back(condition_on);
  Bipartition b;
  b.rho = permute_systems(rho.matrix(), rho.layout(), order);
  b.db = static_cast<Eigen::Index>(rho.layout().dim_of(condition_on));
  b.da = static_cast<Eigen::Index>(rho.dim()) / b.db;
  b.a_layout = a_layout;
  b.b_layout = rho.layout().select({condition_on});
  return b;
}

inline Matrix lift_identity(const Matrix& eta, Eigen::Index da) {
  return tensor(Matrix::Identity(da, da), eta);
}

inline DensityOperator normalized_state(const SystemLayout& layout, const Matrix& m) {
  Matrix h = (m + m.adjoint()) * 0.5;
  // clip round-off negatives before normalizing
  auto s = psd_spectrum(h);
  for (Eigen::Index i = 0; i < s.values.size(); ++i) s.values(i) = std::max(0.0, s.values(i));
  h = from_spectrum(s.vectors, s.values);
  h /= h.trace().real();
  return {layout, h};
}

/// Value and eta-gradient of phi(eta) = -D_alpha(rho || I (x) eta) for a
/// finite alpha != 1 (including 1/2), on the support of eta.
struct ObjectiveGrad {
  double value;
  Matrix grad;
};

inline ObjectiveGrad renyi_objective(const Matrix& rho, const Matrix& eta, Eigen::Index da, double a) {
  const Eigen::Index db = eta.rows();
  const double g = (1.0 - a) / (2.0 * a);
  Eigen::SelfAdjointEigenSolver<Matrix> es((eta + eta.adjoint()) * 0.5);
  Eigen::VectorXd s = es.eigenvalues();
  const Matrix& v = es.eigenvectors();
  const double smax = std::max(s.maxCoeff(), 1e-300);
  for (Eigen::Index i = 0; i < db; ++i)
    if (s(i) <= tol::psd * smax) s(i) = 0.0;
  Eigen::VectorXd sg(db);
  for (Eigen::Index i = 0; i < db; ++i) sg(i) = s(i) > 0.0 ? std::pow(s(i), g) : 0.0;
  const Matrix p = lift_identity(from_spectrum(v, sg), da);
  const Matrix m = p * rho * p;
  Eigen::SelfAdjointEigenSolver<Matrix> ms((m + m.adjoint()) * 0.5);
  const Eigen::VectorXd& mv = ms.eigenvalues();
  const double mmax = std::max(mv.maxCoeff(), 1e-300);
  double q = 0.0;
  Eigen::VectorXd mpow(mv.size());
  for (Eigen::Index i = 0; i < mv.size(); ++i) {
    if (mv(i) > tol::psd * mmax) {
      q += std::pow(mv(i), a);
      mpow(i) = std::pow(mv(i), a - 1.0);
    } else {
      mpow(i) = 0.0;
    }
  }
  if (!(q > 0.0)) return {-kInf, Matrix::Zero(db, db)};
  const double value = -std::log2(q) / (a - 1.0);

  const Matrix ma = from_spectrum(ms.eigenvectors(), mpow);
  Matrix gp = a * (rho * p * ma + ma * p * rho);
  gp = (gp + gp.adjoint()) * 0.5;
  // reduce to B and push through the derivative of eta -> eta^g
  Matrix k = Matrix::Zero(db, db);
  for (Eigen::Index i = 0; i < da; ++i) k += gp.block(i * db, i * db, db, db);
  Matrix kp = v.adjoint() * k * v;
  for (Eigen::Index i = 0; i < db; ++i)
    for (Eigen::Index j = 0; j < db; ++j) {
      double gamma = 0.0;
      if (s(i) > 0.0 && s(j) > 0.0) {
        const double diff = s(i) - s(j);
        gamma = std::abs(diff) > 1e-12 * std::max(s(i), s(j)) ? (sg(i) - sg(j)) / diff
                                                               : g * std::pow(0.5 * (s(i) + s(j)), g - 1.0);
      }
      kp(i, j) *= gamma;
    }
  const Matrix grad_q = v * kp * v.adjoint();
  return {value, -grad_q / ((a - 1.0) * q * std::log(2.0))};
}

/// Upper bound on max phi - phi(eta) for the concave phi: the Frank-Wolfe
/// gap lambda_max(grad) - tr(eta grad).
inline double frank_wolfe_gap(const Matrix& eta, const Matrix& grad) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((grad + grad.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff() - (eta * grad).trace().real();
}

struct AscentResult {
  double value = -kInf;
  Matrix eta;
  double gap = kInf;
  int iterations = 0;
  bool converged = false;
};

/// Maximizes phi(eta) = -D_alpha(rho || I (x) eta) by BFGS over the factor
/// W of eta = W W^dag / tr(W W^dag), starting from eta0. Stops when the
/// Frank-Wolfe gap certifies the value to within kOptTolerance.
inline AscentResult renyi_ascent(const Matrix& rho, Eigen::Index da, double a, const Matrix& eta0,
                                 int max_iter = 2000) {
  const Eigen::Index db = eta0.rows();
  const Eigen::Index nn = db * db;
  const Eigen::Index n = 2 * nn;

  auto unpack = [&](const Eigen::VectorXd& x) {
    Matrix w(db, db);
    for (Eigen::Index k = 0; k < nn; ++k) w(k % db, k / db) = Complex(x(k), x(nn + k));
    return w;
  };
  struct Eval {
    double f = kInf;  // -phi
    Eigen::VectorXd g;
    Matrix eta;
    Matrix grad;  // gradient of phi in eta
  };
  auto evaluate = [&](const Eigen::VectorXd& x) {
    Eval e;
    const Matrix w = unpack(x);
    const Matrix ww = w * w.adjoint();
    const double t = ww.trace().real();
    if (!(t > 0.0)) return e;
    e.eta = ww / t;
    const auto og = renyi_objective(rho, e.eta, da, a);
    if (!std::isfinite(og.value)) return e;
    e.f = -og.value;
    e.grad = og.grad;
    const double shift = (e.eta * og.grad).trace().real();
    const Matrix gw = (og.grad - shift * Matrix::Identity(db, db)) * w * (2.0 / t);
    e.g.resize(n);
    for (Eigen::Index k = 0; k < nn; ++k) {
      e.g(k) = -gw(k % db, k / db).real();
      e.g(nn + k) = -gw(k % db, k / db).imag();
    }
    return e;
  };

  AscentResult r;
  Eigen::VectorXd x(n);
  {
    const Matrix w0 = hermitian_power(eta0 / eta0.trace().real(), 0.5);
    for (Eigen::Index k = 0; k < nn; ++k) {
      x(k) = w0(k % db, k / db).real();
      x(nn + k) = w0(k % db, k / db).imag();
    }
  }
  Eval cur = evaluate(x);
  if (!std::isfinite(cur.f)) return r;
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool fresh = true;
  double best_gap = kInf;
  int best_at = 0;
  for (int it = 1; it <= max_iter; ++it) {
    r.iterations = it;
    r.gap = frank_wolfe_gap(cur.eta, cur.grad);
    if (r.gap <= kOptTolerance) {
      r.converged = true;
      break;
    }
    if (r.gap < best_gap * 0.999) {
      best_gap = r.gap;
      best_at = it;
    } else if (it - best_at > 100) {
      break;  // stalled
    }
    Eigen::VectorXd dir = -hinv * cur.g;
    double slope = cur.g.dot(dir);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      dir = -cur.g;
      slope = -cur.g.squaredNorm();
      fresh = true;
    }
    double step = 1.0;
    Eval next;
    bool accepted = false;
    const double noise = 1e-14 * std::max(1.0, std::abs(cur.f));
    for (int ls = 0; ls < 60; ++ls) {
      next = evaluate(x + step * dir);
      if (std::isfinite(next.f)) {
        const bool armijo = next.f <= cur.f + 1e-4 * step * slope;
        // below the resolution of f, the directional derivative decides
        const double next_slope = next.g.dot(dir);
        const bool flat = next.f <= cur.f + noise && next_slope <= 0.1 * std::abs(slope) && next_slope >= 0.9 * slope;
        if (armijo || flat) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (fresh) break;  // no descent at working precision
      hinv.setIdentity();
      fresh = true;
      continue;
    }
    const Eigen::VectorXd s = step * dir;
    const Eigen::VectorXd y = next.g - cur.g;
    const double sy = s.dot(y);
    x += s;
    cur = std::move(next);
    fresh = false;
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (it == 1) hinv *= sy / y.squaredNorm();
      const double rho_k = 1.0 / sy;
      const Eigen::VectorXd hy = hinv * y;
      hinv += ((sy + y.dot(hy)) * rho_k * rho_k) * (s * s.transpose()) - rho_k * (hy * s.transpose() + s * hy.transpose());
    }
  }
  r.value = -cur.f;
  r.eta = cur.eta;
  return r;
}

}  // namespace detail

/// H_min(A|B) = -log2 min{ tr Y : I_A (x) Y >= rho_AB }.
/// The certificate is eta = Y / tr Y, which satisfies rho <= 2^{-H_min} I (x) eta.
inline EntropyResult min_entropy(const DensityOperator& rho, const std::string& condition_on) {
  const auto bp = detail::bipartition(rho, condition_on);
  const auto sol = sdp::solve_operator_bound(bp.rho, bp.da);
  EntropyResult r;
  r.value = -std::log2(sol.primal);
  r.converged = sol.converged;
  r.iterations = sol.newton_steps;
  r.certificate = detail::normalized_state(bp.b_layout, sol.y);
  return r;
}

/// H_max(A|B) = -H_min(A|C) for a purification rho_ABC.
inline EntropyResult max_entropy(const DensityOperator& rho, const std::string& condition_on) {
  (void)rho.layout().index_of(condition_on);
  const auto pure = purify(rho, "purifier");
  const auto ref = pure.layout().labels().back();
  auto keep = detail::complement(rho.layout(), {condition_on});
  keep.push_back(ref);
  const auto rho_ac = partial_trace(pure, keep);
  auto r = min_entropy(rho_ac, ref);
  r.value = -r.value;
  r.certificate.reset();
  return r;
}

/// Conditional entropy for a finite alpha by direct maximization over eta,
/// restricted to the support of rho_B (which contains an optimizer), with
/// restarts from rho_B and the maximally mixed state. Exposed so the
/// closed-form routes can be cross-checked against it.
inline EntropyResult conditional_renyi_by_ascent(const DensityOperator& rho, const std::string& condition_on,
                                                 double alpha) {
  const auto bp = detail::bipartition(rho, condition_on);
  const Matrix rho_b = partial_trace(rho.matrix(), rho.layout(), {condition_on});
  const auto sb = psd_spectrum(rho_b);
  std::vector<Eigen::Index> support;
  for (Eigen::Index i = 0; i < sb.values.size(); ++i)
    if (sb.values(i) > 0.0) support.push_back(i);
  const auto rank = static_cast<Eigen::Index>(support.size());
  Matrix v(bp.db, rank);
  for (Eigen::Index k = 0; k < rank; ++k) v.col(k) = sb.vectors.col(support[static_cast<std::size_t>(k)]);
  const Matrix lift_v = detail::lift_identity(v, bp.da);
  const Matrix compressed = lift_v.adjoint() * bp.rho * lift_v;

  const Matrix start_b = v.adjoint() * rho_b * v;
  const Matrix mixed = Matrix::Identity(rank, rank) / static_cast<double>(rank);
  auto r1 = detail::renyi_ascent(compressed, bp.da, alpha, start_b);
  auto r2 = detail::renyi_ascent(compressed, bp.da, alpha, mixed);
  const auto& best = r1.value >= r2.value ? r1 : r2;
  EntropyResult r;
  r.value = best.value;
  r.iterations = r1.iterations + r2.iterations;
  r.converged = r1.converged || r2.converged;
  r.certificate = detail::normalized_state(bp.b_layout, v * best.eta * v.adjoint());
  return r;
}

/// H_alpha(A|B)_rho, the optimized sandwiched conditional Renyi entropy.
/// alpha = 1 is H(AB) - H(B) (optimizer eta = rho_B), alpha = inf is the
/// min-entropy and alpha = 1/2 the max-entropy.
inline EntropyResult conditional_renyi_entropy(const DensityOperator& rho, const std::string& condition_on,
                                               AlphaOrder alpha) {
  switch (alpha.kind()) {
    case AlphaOrder::Kind::Infinity: return min_entropy(rho, condition_on);
    case AlphaOrder::Kind::Half: return max_entropy(rho, condition_on);
    case AlphaOrder::Kind::One: {
      const auto rho_b = partial_trace(rho, {condition_on});
      EntropyResult r;
      r.value = renyi_entropy(rho, AlphaOrder::one()) - renyi_entropy(rho_b, AlphaOrder::one());
      r.certificate = rho_b;
      return r;
    }
    case AlphaOrder::Kind::Finite: break;
  }
  return conditional_renyi_by_ascent(rho, condition_on, alpha.value());
}

/// Objective -D_alpha(rho_AB || I_A (x) eta_B) at a given conditioning state.
inline double conditional_objective(const DensityOperator& rho, const std::string& condition_on,
                                    const DensityOperator& eta, AlphaOrder alpha) {
  const auto bp = detail::bipartition(rho, condition_on);
  if (!(eta.layout() == bp.b_layout)) throw Error("conditional_objective: eta layout does not match");
  return -sandwiched_divergence(bp.rho, detail::lift_identity(eta.matrix(), bp.da), alpha);
}

/// H_max(X|M) for a classical joint distribution, joint(x, m):
/// log2 sum_m (sum_x sqrt(Q(x,m)))^2.
inline double cq_max_entropy(const Eigen::MatrixXd& joint) {
  double total = 0.0;
  double s = 0.0;
  for (Eigen::Index m = 0; m < joint.cols(); ++m) {
    double col = 0.0;
    for (Eigen::Index x = 0; x < joint.rows(); ++x) {
      if (joint(x, m) < -tol::trace) throw Error("cq_max_entropy: negative probability");
      col += std::sqrt(std::max(0.0, joint(x, m)));
      total += joint(x, m);
    }
    s += col * col;
  }
  if (std::abs(total - 1.0) > tol::trace) throw Error("cq_max_entropy: joint distribution is not normalized");
  return std::log2(s);
}

/// Same, for a classical register X (outcomes) and a classical (diagonal)
/// quantum part M.
inline double cq_max_entropy(const ClassicalQuantumState& xm) {
  const auto& branches = xm.branches();
  const Eigen::Index dm = branches.front().rows();
  Eigen::MatrixXd joint(static_cast<Eigen::Index>(branches.size()), dm);
  for (std::size_t x = 0; x < branches.size(); ++x) {
    const Matrix& b = branches[x];
    const Matrix off = b - Matrix(b.diagonal().asDiagonal());
    if (off.size() && off.cwiseAbs().maxCoeff() > tol::herm) throw Error("cq_max_entropy: side information is not classical");
    for (Eigen::Index m = 0; m < dm; ++m) joint(static_cast<Eigen::Index>(x), m) = b(m, m).real();
  }
  return cq_max_entropy(joint);
}

}  // namespace mdr
