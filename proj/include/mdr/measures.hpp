#pragma once

// Disturbance, predictive error and the measurement-disturbance relation
//
//     D_alpha + E + H_alpha(Z|R) >= log2(1/c)
//
// evaluated for a state on S (optionally S (x) R), observables X and Z on S
// and an interaction S -> S (x) M.

#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "mdr/core/linalg.hpp"
#include "mdr/core/operations.hpp"
#include "mdr/core/types.hpp"
#include "mdr/entropy/alpha.hpp"
#include "mdr/entropy/conditional.hpp"
#include "mdr/entropy/divergence.hpp"

namespace mdr {

/// Gap tolerance used by every validity contract.
inline constexpr double kGapTolerance = 1e-7;

/// c = max_{x,z} || sqrt(X_x) sqrt(Z_z) ||_inf^2.
inline double overlap_c(const Povm& x, const Povm& z) {
  if (x.dim() != z.dim()) throw Error("overlap_c: POVMs act on different dimensions");
  const bool px = x.is_projective();
  const bool pz = z.is_projective();
  std::vector<Matrix> rz;
  for (const auto& e : z.elements()) rz.push_back(pz ? e : sqrtm_psd(e));
  double c = 0.0;
  for (const auto& ex : x.elements()) {
    const Matrix rx = px ? ex : sqrtm_psd(ex);
    for (const auto& r : rz) {
      const double n = operator_norm(rx * r);
      c = std::max(c, n * n);
    }
  }
  return c;
}

/// Which disturbance and entropy term to use.
enum class MdrVariant {
  Auto,            ///< memory-assisted iff the input carries a reference system
  Classical,       ///< reference traced out; classical divergence and H_alpha(Z)
  MemoryAssisted,  ///< sandwiched divergence on rho_ZR and H_alpha(Z|R)
};

/// (rho, X, Z, E, alpha). The input lives on S or on S (x) R; the channel
/// maps S to S (x) M. Both POVMs act on S.
class MdrScenario {
 public:
  MdrScenario(DensityOperator input, Povm x, Povm z, QuantumChannel channel, AlphaOrder alpha)
      : input_(std::move(input)), x_(std::move(x)), z_(std::move(z)), channel_(std::move(channel)), alpha_(alpha) {
    const auto& in = channel_.input_layout();
    if (in.size() != 1) throw Error("MdrScenario: channel must act on a single system");
    system_ = in.labels().front();
    if (!input_.layout().contains(system_)) throw Error("MdrScenario: input has no system '" + system_ + "'");
    if (input_.layout().dim_of(system_) != in.total_dim()) throw Error("MdrScenario: channel input dimension mismatch");
    if (input_.layout().size() > 2) throw Error("MdrScenario: at most one reference system is supported");
    for (const auto& l : input_.layout().labels())
      if (l != system_) reference_ = l;

    const auto& out = channel_.output_layout();
    if (out.size() != 2 || !out.contains(system_))
      throw Error("MdrScenario: channel output must be the system plus one meter");
    for (const auto& l : out.labels())
      if (l != system_) meter_ = l;
    if (reference_ && *reference_ == meter_) throw Error("MdrScenario: meter and reference share a label");
    if (out.dim_of(system_) != x_.dim() || in.total_dim() != x_.dim() || x_.dim() != z_.dim())
      throw Error("MdrScenario: POVM dimension does not match the system");
  }

  [[nodiscard]] const DensityOperator& input() const noexcept { return input_; }
  [[nodiscard]] const Povm& x() const noexcept { return x_; }
  [[nodiscard]] const Povm& z() const noexcept { return z_; }
  [[nodiscard]] const QuantumChannel& channel() const noexcept { return channel_; }
  [[nodiscard]] AlphaOrder alpha() const noexcept { return alpha_; }
  [[nodiscard]] const std::string& system() const noexcept { return system_; }
  [[nodiscard]] const std::string& meter() const noexcept { return meter_; }
  [[nodiscard]] const std::optional<std::string>& reference() const noexcept { return reference_; }

  [[nodiscard]] DensityOperator reduced_input() const {
    return reference_ ? partial_trace(input_, {system_}) : input_;
  }

  [[nodiscard]] MdrScenario with_alpha(AlphaOrder a) const { return {input_, x_, z_, channel_, a}; }
  [[nodiscard]] MdrScenario swapped() const { return {input_, z_, x_, channel_, alpha_}; }

  [[nodiscard]] bool memory_assisted(MdrVariant v) const {
    return v == MdrVariant::MemoryAssisted || (v == MdrVariant::Auto && reference_.has_value());
  }

 private:
  DensityOperator input_;
  Povm x_;
  Povm z_;
  QuantumChannel channel_;
  AlphaOrder alpha_;
  std::string system_;
  std::string meter_;
  std::optional<std::string> reference_;
};

struct MdrReport {
  AlphaOrder alpha = AlphaOrder::one();
  double disturbance = 0.0;
  double error = 0.0;
  double entropy_term = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  bool memory_assisted = false;
  /// false if any optimizer behind the report missed its tolerance
  bool converged = true;
};

namespace detail {

/// rho_ZR before and after the interaction, as block-diagonal states on (Z, R).
inline std::pair<DensityOperator, DensityOperator> z_reference_states(const MdrScenario& sc) {
  const auto before = measure(sc.input(), sc.z(), sc.system()).embed("Z");
  const auto out = apply_channel(sc.channel(), sc.input());
  auto keep = std::vector<std::string>{sc.system()};
  if (sc.reference()) keep.push_back(*sc.reference());
  const auto after = measure(partial_trace(out, keep), sc.z(), sc.system()).embed("Z");
  return {before, after};
}

}  // namespace detail

/// Divergence between the Z statistics (with R, when memory-assisted)
/// without and with the interaction. M is discarded before the receiver's
/// Z measurement. +inf on support violation.
inline double disturbance(const MdrScenario& sc, MdrVariant variant = MdrVariant::Auto) {
  if (sc.memory_assisted(variant)) {
    const auto [before, after] = detail::z_reference_states(sc);
    return sandwiched_rel_entropy(before, after, sc.alpha());
  }
  const auto rho_s = sc.reduced_input();
  const auto out_s = partial_trace(apply_channel(sc.channel(), rho_s), {sc.system()});
  return renyi_rel_entropy_classical(outcome_distribution(rho_s, sc.z()), outcome_distribution(out_s, sc.z()),
                                     sc.alpha());
}

/// The classical-quantum state rho^E_XM: X measured on the S output of the
/// interaction applied to rho_S.
inline ClassicalQuantumState x_meter_state(const MdrScenario& sc) {
  const auto out = apply_channel(sc.channel(), sc.reduced_input());
  return measure(out, sc.x(), sc.system());
}

namespace detail {

inline bool has_classical_side_information(const ClassicalQuantumState& cq) {
  for (const auto& b : cq.branches()) {
    const Matrix off = b - Matrix(b.diagonal().asDiagonal());
    if (off.size() && off.cwiseAbs().maxCoeff() > tol::herm) return false;
  }
  return true;
}

}  // namespace detail

/// H_max(X|M) of rho^E_XM. Uses the closed form when M is classical
/// (diagonal) and the min-entropy duality otherwise.
inline EntropyResult predictive_error_result(const MdrScenario& sc) {
  const auto xm = x_meter_state(sc);
  if (detail::has_classical_side_information(xm)) {
    EntropyResult r;
    r.value = cq_max_entropy(xm);
    return r;
  }
  return max_entropy(xm.embed("X"), sc.meter());
}

inline double predictive_error(const MdrScenario& sc) { return predictive_error_result(sc).value; }

/// H_alpha(Z)_P or, when memory-assisted with a reference, H_alpha(Z|R)_rho,
/// both on the pre-interaction state.
inline EntropyResult entropy_term(const MdrScenario& sc, MdrVariant variant = MdrVariant::Auto) {
  if (sc.memory_assisted(variant) && sc.reference()) {
    const auto rho_zr = measure(sc.input(), sc.z(), sc.system()).embed("Z");
    return conditional_renyi_entropy(rho_zr, *sc.reference(), sc.alpha());
  }
  EntropyResult r;
  r.value = renyi_entropy(outcome_distribution(sc.reduced_input(), sc.z()), sc.alpha());
  return r;
}

/// Report with a precomputed predictive error (it does not depend on alpha
/// or on the variant, so scans over both can share it).
inline MdrReport mdr_report(const MdrScenario& sc, MdrVariant variant, const EntropyResult& e) {
  MdrReport r;
  r.alpha = sc.alpha();
  r.memory_assisted = sc.memory_assisted(variant);
  r.disturbance = disturbance(sc, variant);
  const auto h = entropy_term(sc, variant);
  r.error = e.value;
  r.entropy_term = h.value;
  r.converged = e.converged && h.converged;
  r.bound = -std::log2(overlap_c(sc.x(), sc.z()));
  r.gap = r.disturbance + r.error + r.entropy_term - r.bound;
  return r;
}

inline MdrReport mdr_report(const MdrScenario& sc, MdrVariant variant = MdrVariant::Auto) {
  return mdr_report(sc, variant, predictive_error_result(sc));
}

/// The relation and its X <-> Z mirror image.
inline std::pair<MdrReport, MdrReport> dual_report(const MdrScenario& sc, MdrVariant variant = MdrVariant::Auto) {
  return {mdr_report(sc, variant), mdr_report(sc.swapped(), variant)};
}

/// Projective measurement of `x` on `system` with the outcome copied into a
/// classical meter: K_k = P_k (x) |k>_M. Lueders update on S.
inline QuantumChannel perfect_measurement_channel(const Povm& x, const std::string& system = "S",
                                                 const std::string& meter = "M") {
  if (!x.is_projective()) throw Error("perfect_measurement_channel: POVM must be projective");
  const auto n = static_cast<Eigen::Index>(x.size());
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < n; ++k) kraus.push_back(tensor(x.elements()[static_cast<std::size_t>(k)], basis_vector(n, k)));
  return {SystemLayout(system, x.dim()), SystemLayout({system, meter}, {x.dim(), x.size()}), kraus};
}

/// Labels for the post-interaction state in check_prep_ur. Absent labels
/// mean the corresponding system is trivial.
struct PrepUrSystems {
  std::string system = "S";
  std::optional<std::string> meter;
  std::optional<std::string> reference;
};

/// H_min(Z|R) + H_max(X|M) - log2(1/c) on a state of S M R.
inline double check_prep_ur(const DensityOperator& state, const Povm& x, const Povm& z, const PrepUrSystems& sys) {
  std::vector<std::string> keep_zr{sys.system};
  if (sys.reference) keep_zr.push_back(*sys.reference);
  std::vector<std::string> keep_xm{sys.system};
  if (sys.meter) keep_xm.push_back(*sys.meter);

  double hmin = 0.0;
  {
    const auto cq = measure(partial_trace(state, keep_zr), z, sys.system);
    if (sys.reference) {
      hmin = min_entropy(cq.embed("Z"), *sys.reference).value;
    } else {
      hmin = renyi_entropy(cq.distribution(), AlphaOrder::infinity());
    }
  }
  double hmax = 0.0;
  {
    const auto cq = measure(partial_trace(state, keep_xm), x, sys.system);
    if (sys.meter) {
      hmax = max_entropy(cq.embed("X"), *sys.meter).value;
    } else {
      hmax = renyi_entropy(cq.distribution(), AlphaOrder::half());
    }
  }
  return hmin + hmax + std::log2(overlap_c(x, z));
}

}  // namespace mdr
