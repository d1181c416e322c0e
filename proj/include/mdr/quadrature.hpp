#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "mdr/core/types.hpp"

namespace mdr::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
inline Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw Error("gauss_legendre: need at least one node");
  Rule r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        const double jd = static_cast<double>(j);
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      pp = nd * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

/// The rule mapped to [a, b].
inline Rule mapped(const Rule& base, double a, double b) {
  Rule r = base;
  const double h = (b - a) / 2.0;
  const double m = (b + a) / 2.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) {
    r.nodes[i] = m + h * base.nodes[i];
    r.weights[i] = h * base.weights[i];
  }
  return r;
}

/// Uniform grid of n points spanning [lo, hi] with composite-trapezoid weights.
struct UniformGrid {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 2;

  UniformGrid(double lo_, double hi_, std::size_t n_) : lo(lo_), hi(hi_), n(n_) {
    if (n < 2 || !(hi > lo)) throw Error("UniformGrid: need n >= 2 and hi > lo");
  }

  [[nodiscard]] double step() const { return (hi - lo) / static_cast<double>(n - 1); }
  [[nodiscard]] double at(std::size_t i) const { return i + 1 == n ? hi : lo + step() * static_cast<double>(i); }
  [[nodiscard]] double weight(std::size_t i) const { return (i == 0 || i + 1 == n) ? step() / 2.0 : step(); }
};

template <class F>
double trapezoid(const UniformGrid& g, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) s += g.weight(i) * f(g.at(i));
  return s;
}

}  // namespace mdr::quad
