// Runs every acceptance criterion once and prints one PASS/FAIL line each.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "mdr/cli/commands.hpp"
#include "mdr/cv.hpp"
#include "mdr/fuzz.hpp"
#include "mdr/measures.hpp"
#include "mdr/qubit.hpp"
#include "mdr/random.hpp"

using namespace mdr;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("[%s] %2d %-34s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
  std::fflush(stdout);
}

}  // namespace

int main() {
  const std::uint64_t seed = 42;

  criterion(1, "qubit closed forms, 50x50 grid", [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto v = qubit::validate_analytic_vs_numeric(50, 50);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    Outcome o;
    o.pass = v.points == 2500 && v.converged && v.closed_form_deviation < 1e-9 && v.solver_deviation < 1e-6 &&
             secs < 60.0;
    o.detail = fmt("closed-form dev %.2e", v.closed_form_deviation) + fmt(", solver dev %.2e", v.solver_deviation);
    return o;
  });

  criterion(2, "tight for pure inputs at every theta", [] {
    double worst = 0.0;
    for (double th : qubit::linspace(0.0, qubit::kHalfPi, 50)) {
      const auto rep = mdr_report(qubit::scenario(1.0, th), MdrVariant::Classical);
      worst = std::max({worst, std::abs(rep.gap), std::abs(rep.disturbance + rep.error - 1.0)});
    }
    return Outcome{worst <= 1e-6, fmt("max |gap| %.2e", worst)};
  });

  criterion(3, "memory-assisted equality, 50x50", [] {
    double worst = 0.0;
    for (double th : qubit::linspace(0.0, qubit::kHalfPi, 50))
      for (double r : qubit::linspace(0.0, 1.0, 50)) {
        const auto rep = qubit::memory_scenario(r, th);
        const double l = std::log2(1.0 + std::sin(th));
        worst = std::max({worst, std::abs(rep.gap), std::abs(rep.disturbance - (1.0 - l)), std::abs(rep.error - l)});
      }
    return Outcome{worst <= 1e-6, fmt("max deviation %.2e", worst)};
  });

  criterion(4, "MUB + perfect X measurement equality", [seed] {
    double worst = 0.0;
    std::size_t reports = 0;
    const SystemLayout q("S", 2);
    for (std::uint64_t t = 0; t < 100; ++t) {
      random::SeededStream s(seed, t);
      const auto rho = random::random_density(q, s.uniform_int(1, 2), s);
      const auto mub = random::random_mub_pair(q, s);
      const auto ch = perfect_measurement_channel(mub.x);
      for (const auto& a : fuzz_alpha_grid()) {
        worst = std::max(worst, std::abs(mdr_report(MdrScenario(rho, mub.x, mub.z, ch, a)).gap));
        ++reports;
      }
    }
    return Outcome{worst <= 1e-6, fmt("%.0f reports", double(reports)) + fmt(", max |gap| %.2e", worst)};
  });

  criterion(5, "relation fuzz, d = 2, 3, 4", [seed] {
    const auto t0 = std::chrono::steady_clock::now();
    fuzz::InstanceShape shape;
    const auto d2 = fuzz::run_mdr_campaign(shape, 1000, fuzz_alpha_grid(), seed);
    shape.dim = 3;
    const auto d3 = fuzz::run_mdr_campaign(shape, 200, fuzz_alpha_grid(), seed);
    shape.dim = 4;
    const auto d4 = fuzz::run_mdr_campaign(shape, 200, fuzz_alpha_grid(), seed);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::size_t viol = d2.violations.size() + d3.violations.size() + d4.violations.size();
    const std::size_t nc = d2.nonconverged + d3.nonconverged + d4.nonconverged;
    const double min_gap = std::min({d2.min_gap, d3.min_gap, d4.min_gap});
    Outcome o;
    o.pass = viol == 0 && secs < 600.0;
    o.detail = fmt("%.0f reports", double(d2.reports + d3.reports + d4.reports)) + fmt(", min gap %.3e", min_gap) +
               fmt(", %.0f violations", double(viol)) + fmt(", %.0f unconverged", double(nc));
    return o;
  });

  criterion(6, "proof ingredients", [seed] {
    const auto main = fuzz::run_main_inequality(1000, fuzz_alpha_grid(), seed);
    const auto prep = fuzz::run_prep_ur(1000, seed);
    const auto dual = fuzz::run_duality(500, seed);
    Outcome o;
    o.pass = main.passed() && prep.passed() && dual.passed();
    o.detail = fmt("margins: main %.2e", main.min_margin) + fmt(", prep %.2e", prep.min_margin) +
               fmt(", duality %.2e", dual.min_margin);
    return o;
  });

  criterion(7, "Gaussian gap identity", [] {
    double worst = 0.0;
    bool monotone = true;
    double prev = -kInf;
    for (int k = 0; k < 50; ++k) {
      const double lam = std::pow(10.0, -3.0 + 6.0 * k / 49.0);
      const double g = cv::cv_mdr_report(cv::GaussianModel(1.0, lam)).gap;
      worst = std::max(worst, std::abs(g - 1.0 / (2.0 * cv::kLn2) / (1.0 + 1.0 / lam)));
      monotone = monotone && g > prev;
      prev = g;
    }
    const double small = cv::cv_mdr_report(cv::GaussianModel(1.0, 0.01)).gap;
    return Outcome{worst <= 1e-10 && monotone && small < 8e-3,
                   fmt("max dev %.2e", worst) + fmt(", gap(0.01) = %.5f", small)};
  });

  criterion(8, "conditional max-entropy quadrature", [] {
    double worst = 0.0;
    bool ok = true;
    for (const auto& l : cli::lemma3_suite()) {
      worst = std::max(worst, l.deviation);
      ok = ok && l.pass;
    }
    return Outcome{ok && worst < 1e-4, fmt("max dev %.2e over 3x3", worst)};
  });

  criterion(9, "coarse-grained divergence limit", [] {
    double worst = 0.0;
    bool ok = true;
    for (const auto& l : cli::lemma1_suite()) {
      worst = std::max(worst, l.deviation);
      ok = ok && l.pass;
    }
    return Outcome{ok && worst < 1e-3, fmt("max error at n = 12: %.2e", worst)};
  });

  criterion(10, "complementarity constant", [] {
    const auto small = cv::complementarity_constant_detail(0.1, 0.1);
    const double ratio = small.c / small.small_product_limit;
    bool monotone = true;
    double prev = 0.0;
    double refine = 0.0;
    for (double p : {0.01, 0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
      const auto r = cv::complementarity_constant_detail(std::sqrt(p), std::sqrt(p));
      monotone = monotone && r.c > prev;
      refine = std::max(refine, std::abs(r.c - r.refined));
      prev = r.c;
    }
    return Outcome{ratio >= 0.999 && ratio <= 1.0 && monotone && refine <= 1e-8,
                   fmt("ratio %.8f", ratio) + fmt(", refinement %.1e", refine)};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures;
}
