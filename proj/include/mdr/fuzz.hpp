#pragma once

// Randomized validity campaigns for the relation and its proof
// ingredients. Trial k of a campaign draws from SeededStream(seed, first + k),
// so any failing instance is replayed from (seed, stream id) alone.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mdr/core/operations.hpp"
#include "mdr/entropy/conditional.hpp"
#include "mdr/entropy/properties.hpp"
#include "mdr/measures.hpp"
#include "mdr/random.hpp"

namespace mdr::fuzz {

struct InstanceShape {
  std::size_t dim = 2;        // S
  std::size_t ref_dim = 2;    // R
  std::size_t meter_dim = 2;  // M
  std::size_t env_dim = 2;    // environment of the Stinespring isometry
};

struct Instance {
  DensityOperator input;  // on (S, R), random rank
  QuantumChannel channel; // S -> (S, M)
  random::PovmPair mub;
};

inline Instance sample_instance(const InstanceShape& shape, random::SeededStream& s) {
  const SystemLayout sys("S", shape.dim);
  const SystemLayout sr({"S", "R"}, {shape.dim, shape.ref_dim});
  const std::size_t full = shape.dim * shape.ref_dim;
  const auto rank = static_cast<std::size_t>(s.uniform_int(1, full));
  auto input = random::random_density(sr, rank, s);
  auto channel = random::random_channel(sys, SystemLayout({"S", "M"}, {shape.dim, shape.meter_dim}), shape.env_dim, s);
  auto mub = random::random_mub_pair(sys, s);
  return {std::move(input), std::move(channel), std::move(mub)};
}

struct Violation {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::string alpha;
  bool memory_assisted = false;
  double gap = 0.0;
};

struct CampaignResult {
  std::size_t trials = 0;
  std::size_t reports = 0;
  double min_gap = kInf;
  std::size_t nonconverged = 0;
  std::vector<Violation> violations;

  [[nodiscard]] bool passed() const { return violations.empty(); }
};

/// Classical and memory-assisted reports for every alpha on `trials`
/// random instances.
inline CampaignResult run_mdr_campaign(const InstanceShape& shape, std::size_t trials,
                                       const std::vector<AlphaOrder>& alphas, std::uint64_t seed,
                                       std::uint64_t first_stream = 0, double tolerance = kGapTolerance) {
  CampaignResult res;
  res.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const std::uint64_t stream = first_stream + t;
    random::SeededStream s(seed, stream);
    const auto inst = sample_instance(shape, s);
    const MdrScenario base(inst.input, inst.mub.x, inst.mub.z, inst.channel, alphas.front());
    const auto error = predictive_error_result(base);
    bool converged = error.converged;
    for (const auto& a : alphas) {
      const auto sc = base.with_alpha(a);
      for (auto variant : {MdrVariant::Classical, MdrVariant::MemoryAssisted}) {
        const auto rep = mdr_report(sc, variant, error);
        ++res.reports;
        converged = converged && rep.converged;
        res.min_gap = std::min(res.min_gap, rep.gap);
        if (!(rep.gap >= -tolerance))
          res.violations.push_back({seed, stream, a.to_string(), rep.memory_assisted, rep.gap});
      }
    }
    if (!converged) ++res.nonconverged;
  }
  return res;
}

struct MarginResult {
  std::size_t trials = 0;
  double min_margin = kInf;
  std::size_t failures = 0;
  std::uint64_t worst_stream = 0;
  std::size_t nonconverged = 0;

  [[nodiscard]] bool passed() const { return failures == 0; }
};

inline void record(MarginResult& r, double margin, std::uint64_t stream, double tolerance) {
  if (margin < r.min_margin) {
    r.min_margin = margin;
    r.worst_stream = stream;
  }
  if (!(margin >= -tolerance)) ++r.failures;
}

/// D_alpha(rho||sigma) >= H_min(A|B)_sigma - H_alpha(A|B)_rho on random pairs
/// of 2 x 2 states (sigma of full rank), alpha cycling through `alphas`.
inline MarginResult run_main_inequality(std::size_t trials, const std::vector<AlphaOrder>& alphas, std::uint64_t seed,
                                        double tolerance = kGapTolerance) {
  MarginResult r;
  r.trials = trials;
  const SystemLayout ab({"A", "B"}, {2, 2});
  for (std::size_t t = 0; t < trials; ++t) {
    random::SeededStream s(seed, t);
    const auto rank = static_cast<std::size_t>(s.uniform_int(1, 4));
    const auto rho = random::random_density(ab, rank, s);
    const auto sigma = random::random_density(ab, 4, s);
    const auto a = alphas[t % alphas.size()];
    const double m = check_main_inequality(rho, sigma, "B", a);
    record(r, std::isinf(m) ? kInf : m, t, tolerance);
  }
  return r;
}

/// H_min(Z|R) + H_max(X|M) >= log 1/c on random states of (S, M, R), all qubits,
/// with a random MUB pair on S.
inline MarginResult run_prep_ur(std::size_t trials, std::uint64_t seed, double tolerance = kGapTolerance) {
  MarginResult r;
  r.trials = trials;
  const SystemLayout smr({"S", "M", "R"}, {2, 2, 2});
  const SystemLayout sys("S", 2);
  for (std::size_t t = 0; t < trials; ++t) {
    random::SeededStream s(seed, t);
    const auto rank = static_cast<std::size_t>(s.uniform_int(1, 8));
    const auto rho = random::random_density(smr, rank, s);
    const auto mub = random::random_mub_pair(sys, s);
    record(r, check_prep_ur(rho, mub.x, mub.z, {"S", "M", "R"}), t, tolerance);
  }
  return r;
}

/// H_max(A|B) + H_min(A|C) = 0 on random pure states of A B C, with
/// H_max evaluated on rho_AB and H_min on rho_AC. Dimensions (2,2,2) and
/// (2,3,2) alternate. The margin is minus the worst deviation.
inline MarginResult run_duality(std::size_t trials, std::uint64_t seed, double tolerance = kGapTolerance) {
  MarginResult r;
  r.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    random::SeededStream s(seed, t);
    const SystemLayout abc({"A", "B", "C"}, {2, t % 2 == 0 ? 2u : 3u, 2});
    const auto psi = random::haar_pure(abc, s);
    const auto hmax = max_entropy(partial_trace(psi, {"A", "B"}), "B");
    const auto hmin = min_entropy(partial_trace(psi, {"A", "C"}), "C");
    if (!hmax.converged || !hmin.converged) ++r.nonconverged;
    // the fidelity form, optimized directly, must agree as well
    const auto direct = conditional_renyi_by_ascent(partial_trace(psi, {"A", "B"}), "B", 0.5);
    const double dev = std::max(std::abs(hmax.value + hmin.value), std::abs(direct.value - hmax.value));
    record(r, -dev, t, tolerance);
  }
  return r;
}

}  // namespace mdr::fuzz
