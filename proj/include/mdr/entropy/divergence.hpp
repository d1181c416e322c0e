#pragma once

// Classical and sandwiched Renyi divergences and unconditional Renyi
// entropies. All logarithms are base 2.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "mdr/core/linalg.hpp"
#include "mdr/core/types.hpp"
#include "mdr/entropy/alpha.hpp"

namespace mdr {

namespace detail {

inline void require_distribution(std::span<const double> p, const char* what) {
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= -tol::trace)) throw Error(std::string(what) + ": negative probability");
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol::trace) throw Error(std::string(what) + ": probabilities sum to " + std::to_string(sum));
}

/// D_alpha(P||Q) for normalized P and nonnegative (not necessarily
/// normalized) Q.
inline double classical_divergence(std::span<const double> p, std::span<const double> q, AlphaOrder alpha) {
  if (p.size() != q.size()) throw Error("renyi divergence: outcome sets differ in size");
  const std::size_t n = p.size();
  auto pi = [&](std::size_t i) { return std::max(0.0, p[i]); };
  auto qi = [&](std::size_t i) { return std::max(0.0, q[i]); };

  switch (alpha.kind()) {
    case AlphaOrder::Kind::One: {
      double d = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pi(i) == 0.0) continue;
        if (qi(i) == 0.0) return kInf;
        d += pi(i) * std::log2(pi(i) / qi(i));
      }
      return d;
    }
    case AlphaOrder::Kind::Infinity: {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pi(i) == 0.0) continue;
        if (qi(i) == 0.0) return kInf;
        m = std::max(m, pi(i) / qi(i));
      }
      return std::log2(m);
    }
    case AlphaOrder::Kind::Half: {
      double f = 0.0;
      for (std::size_t i = 0; i < n; ++i) f += std::sqrt(pi(i) * qi(i));
      return f > 0.0 ? -2.0 * std::log2(f) : kInf;
    }
    case AlphaOrder::Kind::Finite: {
      const double a = alpha.value();
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pi(i) == 0.0) continue;
        if (qi(i) == 0.0) {
          if (a > 1.0) return kInf;
          continue;
        }
        s += std::pow(pi(i), a) * std::pow(qi(i), 1.0 - a);
      }
      if (s <= 0.0) return kInf;
      return std::log2(s) / (a - 1.0);
    }
  }
  return kInf;
}

}  // namespace detail

/// Classical Renyi relative entropy of two distributions on the same outcome set.
inline double renyi_rel_entropy_classical(std::span<const double> p, std::span<const double> q, AlphaOrder alpha) {
  detail::require_distribution(p, "renyi divergence P");
  detail::require_distribution(q, "renyi divergence Q");
  return detail::classical_divergence(p, q, alpha);
}

inline double renyi_rel_entropy_classical(const std::vector<double>& p, const std::vector<double>& q, AlphaOrder alpha) {
  return renyi_rel_entropy_classical(std::span<const double>(p), std::span<const double>(q), alpha);
}

/// H_alpha(P) = log d - D_alpha(P || uniform).
inline double renyi_entropy(std::span<const double> p, AlphaOrder alpha) {
  detail::require_distribution(p, "renyi entropy");
  const double d = static_cast<double>(p.size());
  const std::vector<double> u(p.size(), 1.0 / d);
  return std::log2(d) - detail::classical_divergence(p, u, alpha);
}

inline double renyi_entropy(const std::vector<double>& p, AlphaOrder alpha) {
  return renyi_entropy(std::span<const double>(p), alpha);
}

/// Renyi entropy of a density operator's spectrum.
inline double renyi_entropy(const DensityOperator& rho, AlphaOrder alpha) {
  const auto s = psd_spectrum(rho.matrix());
  std::vector<double> p(s.values.data(), s.values.data() + s.values.size());
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= sum;
  return renyi_entropy(p, alpha);
}

/// Sandwiched Renyi divergence D_alpha(rho||sigma) for a trace-one PSD
/// `rho` and any PSD `sigma` (unnormalized sigma such as I (x) eta is
/// allowed). Returns +inf when the support condition fails for alpha >= 1
/// or the supports are orthogonal for alpha < 1.
inline double sandwiched_divergence(const Matrix& rho, const Matrix& sigma, AlphaOrder alpha) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw Error("sandwiched divergence: dimension mismatch");
  const auto rs = psd_spectrum(rho);
  const auto ss = psd_spectrum(sigma);
  const Eigen::Index d = rho.rows();

  // weight of rho on ker(sigma)
  double leak = 0.0;
  for (Eigen::Index k = 0; k < d; ++k)
    if (ss.values(k) == 0.0) leak += (ss.vectors.col(k).adjoint() * rho * ss.vectors.col(k))(0, 0).real();
  const bool supported = leak <= 1e-10;

  switch (alpha.kind()) {
    case AlphaOrder::Kind::One: {
      if (!supported) return kInf;
      double d1 = 0.0;
      for (Eigen::Index i = 0; i < d; ++i)
        if (rs.values(i) > 0.0) d1 += rs.values(i) * std::log2(rs.values(i));
      for (Eigen::Index k = 0; k < d; ++k) {
        if (ss.values(k) == 0.0) continue;
        const double w = (ss.vectors.col(k).adjoint() * rho * ss.vectors.col(k))(0, 0).real();
        d1 -= w * std::log2(ss.values(k));
      }
      return d1;
    }
    case AlphaOrder::Kind::Infinity: {
      if (!supported) return kInf;
      Eigen::VectorXd inv_sqrt = ss.values;
      for (Eigen::Index k = 0; k < d; ++k) inv_sqrt(k) = ss.values(k) > 0.0 ? 1.0 / std::sqrt(ss.values(k)) : 0.0;
      const Matrix s = from_spectrum(ss.vectors, inv_sqrt);
      const Matrix m = s * rho * s;
      Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
      const double lmax = es.eigenvalues().maxCoeff();
      return lmax > 0.0 ? std::log2(lmax) : kInf;
    }
    case AlphaOrder::Kind::Half: {
      Eigen::VectorXd sr = rs.values.cwiseSqrt();
      Eigen::VectorXd srs = ss.values.cwiseSqrt();
      const double tn = trace_norm(from_spectrum(rs.vectors, sr) * from_spectrum(ss.vectors, srs));
      return tn > 0.0 ? -2.0 * std::log2(tn) : kInf;
    }
    case AlphaOrder::Kind::Finite: {
      const double a = alpha.value();
      if (a > 1.0 && !supported) return kInf;
      const double g = (1.0 - a) / (2.0 * a);
      Eigen::VectorXd pw = ss.values;
      for (Eigen::Index k = 0; k < d; ++k) pw(k) = ss.values(k) > 0.0 ? std::pow(ss.values(k), g) : 0.0;
      const Matrix s = from_spectrum(ss.vectors, pw);
      const Matrix m = s * rho * s;
      Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
      double q = 0.0;
      for (Eigen::Index k = 0; k < d; ++k)
        if (es.eigenvalues()(k) > 0.0) q += std::pow(es.eigenvalues()(k), a);
      if (q <= 0.0) return kInf;
      return std::log2(q) / (a - 1.0);
    }
  }
  return kInf;
}

inline double sandwiched_rel_entropy(const DensityOperator& rho, const DensityOperator& sigma, AlphaOrder alpha) {
  if (!(rho.layout() == sigma.layout())) throw Error("sandwiched_rel_entropy: layouts differ");
  return sandwiched_divergence(rho.matrix(), sigma.matrix(), alpha);
}

}  // namespace mdr
