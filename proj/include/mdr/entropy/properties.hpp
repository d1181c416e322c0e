#pragma once

#include <algorithm>
#include <cstddef>
#include <string>

#include "mdr/core/operations.hpp"
#include "mdr/entropy/conditional.hpp"
#include "mdr/entropy/divergence.hpp"
#include "mdr/random.hpp"

namespace mdr {

/// D_alpha(rho||sigma) - [H_min(A|B)_sigma - H_alpha(A|B)_rho]; nonnegative
/// for every pair of states and every alpha in [1/2, inf].
inline double check_main_inequality(const DensityOperator& rho, const DensityOperator& sigma,
                                    const std::string& condition_on, AlphaOrder alpha) {
  if (!(rho.layout() == sigma.layout())) throw Error("check_main_inequality: layouts differ");
  const double d = sandwiched_rel_entropy(rho, sigma, alpha);
  if (std::isinf(d)) return kInf;
  const double hmin = min_entropy(sigma, condition_on).value;
  const double ha = conditional_renyi_entropy(rho, condition_on, alpha).value;
  return d - (hmin - ha);
}

struct Lemma2Report {
  bool holds = true;
  /// min over trials of D(rho||I (x) sigma_B) - D(rho||I (x) rho_B)
  double min_margin = kInf;
  std::size_t trials = 0;
};

/// Checks that rho_B minimizes D(rho_AB || I_A (x) sigma_B) against random
/// full-rank sigma_B drawn from `stream`.
inline Lemma2Report check_lemma2_optimality(const DensityOperator& rho, const std::string& condition_on,
                                            std::size_t trials, random::SeededStream& stream,
                                            double tolerance = kOptTolerance) {
  const auto bp = detail::bipartition(rho, condition_on);
  const Matrix rho_b = partial_trace(rho.matrix(), rho.layout(), {condition_on});
  const double base = sandwiched_divergence(bp.rho, detail::lift_identity(rho_b, bp.da), AlphaOrder::one());
  Lemma2Report rep;
  rep.trials = trials;
  for (std::size_t k = 0; k < trials; ++k) {
    const auto sigma = random::random_density(bp.b_layout, bp.b_layout.total_dim(), stream);
    const double d = sandwiched_divergence(bp.rho, detail::lift_identity(sigma.matrix(), bp.da), AlphaOrder::one());
    const double margin = d - base;
    rep.min_margin = std::min(rep.min_margin, margin);
    if (margin < -tolerance) rep.holds = false;
  }
  return rep;
}

}  // namespace mdr
