#pragma once

// Barrier (interior-point) solver for
//
//     minimize tr(Y)  subject to  I_A (x) Y - rho_AB >= 0,
//
// the convex program behind the conditional min-entropy. Y is Hermitian on
// B and is parameterized by its d_B^2 real coordinates in the basis
// {E_ii, E_ij + E_ji, i(E_ij - E_ji)}. Each centering step is a damped
// Newton step on  t tr(Y) - log det(I (x) Y - rho). On exit the dual point
// X = S^{-1}/t is rescaled to satisfy tr_A X = I exactly, which gives a
// certified lower bound tr(rho X) on the optimum.

#include <cmath>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "mdr/core/linalg.hpp"
#include "mdr/core/types.hpp"

namespace mdr::sdp {

struct OperatorBoundResult {
  Matrix y;            // primal optimizer (strictly feasible)
  double primal = 0;   // tr(Y)
  double dual = 0;     // certified lower bound on the optimum
  int newton_steps = 0;
  bool converged = false;
};

struct OperatorBoundOptions {
  double barrier_gap = 1e-11;  // stop when m/t drops below this
  double duality_gap = 1e-8;   // convergence certificate threshold
  double growth = 20.0;
  int max_newton_per_center = 200;
  int max_outer = 60;
  double centering_tol = 1e-9;  // half squared Newton decrement
};

namespace detail {

struct HermitianBasis {
  struct Element {
    Eigen::Index i, j;
    int type;  // 0 diag, 1 symmetric, 2 antisymmetric
  };
  std::vector<Element> elements;

  explicit HermitianBasis(Eigen::Index d) {
    for (Eigen::Index i = 0; i < d; ++i) elements.push_back({i, i, 0});
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = i + 1; j < d; ++j) {
        elements.push_back({i, j, 1});
        elements.push_back({i, j, 2});
      }
  }

  [[nodiscard]] Eigen::Index size() const { return static_cast<Eigen::Index>(elements.size()); }

  [[nodiscard]] Matrix to_matrix(const Eigen::VectorXd& y, Eigen::Index d) const {
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < size(); ++k) {
      const auto& e = elements[static_cast<std::size_t>(k)];
      switch (e.type) {
        case 0: m(e.i, e.i) += y(k); break;
        case 1: m(e.i, e.j) += y(k); m(e.j, e.i) += y(k); break;
        default: m(e.i, e.j) += Complex(0, y(k)); m(e.j, e.i) -= Complex(0, y(k)); break;
      }
    }
    return m;
  }

  /// Coordinates tr(B_k H) of a Hermitian H.
  [[nodiscard]] Eigen::VectorXd project(const Matrix& h) const {
    Eigen::VectorXd g(size());
    for (Eigen::Index k = 0; k < size(); ++k) {
      const auto& e = elements[static_cast<std::size_t>(k)];
      switch (e.type) {
        case 0: g(k) = h(e.i, e.i).real(); break;
        case 1: g(k) = 2.0 * h(e.i, e.j).real(); break;
        default: g(k) = 2.0 * h(e.i, e.j).imag(); break;
      }
    }
    return g;
  }

  /// Coordinates of y -> I_B as a vector (for the linear objective tr Y).
  [[nodiscard]] Eigen::VectorXd trace_functional() const {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(size());
    for (Eigen::Index k = 0; k < size(); ++k)
      if (elements[static_cast<std::size_t>(k)].type == 0) c(k) = 1.0;
    return c;
  }
};

inline Matrix lift(const Matrix& y, Eigen::Index da) {
  const Eigen::Index db = y.rows();
  Matrix out = Matrix::Zero(da * db, da * db);
  for (Eigen::Index a = 0; a < da; ++a) out.block(a * db, a * db, db, db) = y;
  return out;
}

inline Matrix partial_trace_a(const Matrix& m, Eigen::Index da) {
  const Eigen::Index db = m.rows() / da;
  Matrix out = Matrix::Zero(db, db);
  for (Eigen::Index a = 0; a < da; ++a) out += m.block(a * db, a * db, db, db);
  return out;
}

/// log det of a Hermitian matrix, or NaN if it is not positive definite.
inline double logdet_pd(const Matrix& s, Eigen::LLT<Matrix>& llt) {
  llt.compute(s);
  if (llt.info() != Eigen::Success) return std::nan("");
  const auto& l = llt.matrixLLT();
  double ld = 0.0;
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    const double v = l(i, i).real();
    if (!(v > 0.0)) return std::nan("");
    ld += 2.0 * std::log(v);
  }
  return ld;
}

}  // namespace detail

/// Solves min tr(Y) s.t. I_A (x) Y >= rho with rho given on A (x) B (B the
/// fast index) and dim A = da.
inline OperatorBoundResult solve_operator_bound(const Matrix& rho, Eigen::Index da,
                                                const OperatorBoundOptions& opt = {}) {
  const Eigen::Index dim = rho.rows();
  if (da <= 0 || dim % da != 0) throw Error("operator bound: dimension of A does not divide the state");
  const Eigen::Index db = dim / da;
  const Matrix r = (rho + rho.adjoint()) * 0.5;
  const detail::HermitianBasis basis(db);
  const Eigen::Index n = basis.size();
  const Eigen::VectorXd c = basis.trace_functional();
  const double m_barrier = static_cast<double>(dim);

  Eigen::SelfAdjointEigenSolver<Matrix> es(r, Eigen::EigenvaluesOnly);
  const double lmax = std::max(es.eigenvalues().maxCoeff(), 0.0);
  Eigen::VectorXd y = c * (lmax + 1.0);

  Eigen::LLT<Matrix> llt;
  auto barrier = [&](const Eigen::VectorXd& v, double t) {
    const Matrix s = detail::lift(basis.to_matrix(v, db), da) - r;
    const double ld = detail::logdet_pd(s, llt);
    if (std::isnan(ld)) return std::nan("");
    return t * c.dot(v) - ld;
  };

  OperatorBoundResult res;
  double t = 1.0;
  int outer = 0;
  for (; outer < opt.max_outer; ++outer) {
    for (int it = 0; it < opt.max_newton_per_center; ++it) {
      const Matrix s = detail::lift(basis.to_matrix(y, db), da) - r;
      llt.compute(s);
      const Matrix w = llt.solve(Matrix::Identity(dim, dim));
      const Eigen::VectorXd g = t * c - basis.project(detail::partial_trace_a(w, da));

      // Hessian: H_kl = tr(B_k T(B_l)), T(B) = sum_ab W_ab B W_ba.
      std::vector<Matrix> elem(static_cast<std::size_t>(db * db));
      for (Eigen::Index p = 0; p < db; ++p)
        for (Eigen::Index q = 0; q < db; ++q) {
          Matrix tpq = Matrix::Zero(db, db);
          for (Eigen::Index a = 0; a < da; ++a)
            for (Eigen::Index b = 0; b < da; ++b)
              tpq.noalias() += w.block(a * db, b * db, db, db).col(p) * w.block(b * db, a * db, db, db).row(q);
          elem[static_cast<std::size_t>(p * db + q)] = std::move(tpq);
        }
      Eigen::MatrixXd h(n, n);
      for (Eigen::Index l = 0; l < n; ++l) {
        const auto& e = basis.elements[static_cast<std::size_t>(l)];
        const Matrix& tij = elem[static_cast<std::size_t>(e.i * db + e.j)];
        const Matrix& tji = elem[static_cast<std::size_t>(e.j * db + e.i)];
        Matrix tb;
        switch (e.type) {
          case 0: tb = tij; break;
          case 1: tb = tij + tji; break;
          default: tb = Complex(0, 1) * (tij - tji); break;
        }
        h.col(l) = basis.project(tb);
      }
      h = (h + h.transpose()) * 0.5;

      Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      Eigen::VectorXd step = ldlt.solve(-g);
      if (ldlt.info() != Eigen::Success || !step.allFinite()) break;
      const double decrement2 = -g.dot(step);
      ++res.newton_steps;
      if (decrement2 < 0.0 || decrement2 * 0.5 <= opt.centering_tol) break;

      const double f0 = barrier(y, t);
      double alpha = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 60; ++ls) {
        const Eigen::VectorXd cand = y + alpha * step;
        const double f1 = barrier(cand, t);
        if (!std::isnan(f1) && f1 <= f0 - 0.25 * alpha * decrement2) {
          y = cand;
          // progress below the round-off floor of the barrier value
          moved = f0 - f1 > 1e-13 * std::max(1.0, std::abs(f0));
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
    }
    if (m_barrier / t < opt.barrier_gap) break;
    t *= opt.growth;
  }

  res.y = basis.to_matrix(y, db);
  res.primal = res.y.trace().real();

  // dual certificate from the central path
  const Matrix s = detail::lift(res.y, da) - r;
  llt.compute(s);
  Matrix x = llt.solve(Matrix::Identity(dim, dim)) / t;
  x = (x + x.adjoint()) * 0.5;
  const Matrix z = detail::partial_trace_a(x, da);
  const Matrix z_inv_sqrt = hermitian_power(z, -0.5);
  const Matrix lifted = detail::lift(z_inv_sqrt, da);
  const Matrix xn = lifted * x * lifted;
  res.dual = (r * xn).trace().real();
  res.converged = std::isfinite(res.primal) && std::isfinite(res.dual) && res.primal - res.dual <= opt.duality_gap &&
                  res.primal - res.dual >= -opt.duality_gap;
  return res;
}

}  // namespace mdr::sdp
