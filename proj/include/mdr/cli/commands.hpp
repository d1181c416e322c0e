#pragma once

// Command implementations behind the `mdr` tool. Each command writes its
// machine-readable result (CSV, or JSON with --json) to `out` and a
// human summary to `log`, and returns the process exit code.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "mdr/core/io.hpp"
#include "mdr/cv.hpp"
#include "mdr/entropy/conditional.hpp"
#include "mdr/entropy/divergence.hpp"
#include "mdr/entropy/properties.hpp"
#include "mdr/fuzz.hpp"
#include "mdr/measures.hpp"
#include "mdr/measures_io.hpp"
#include "mdr/qubit.hpp"

namespace mdr::cli {

enum ExitCode : int { kPass = 0, kViolation = 1, kUsage = 2 };

/// Thrown for malformed arguments or input files; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Streams {
  std::ostream& out;
  std::ostream& log;
};

// entropy -------------------------------------------------------------------

struct EntropyOptions {
  std::string state_path;
  std::vector<AlphaOrder> alphas = {AlphaOrder::one()};
  std::optional<std::string> condition_on;  // default: last subsystem
  bool json = false;
};

inline int cmd_entropy(const EntropyOptions& o, Streams io) {
  const auto rho = io::load_state(o.state_path);
  std::optional<std::string> cond = o.condition_on;
  if (!cond && rho.layout().size() >= 2) cond = rho.layout().labels().back();
  if (cond && !rho.layout().contains(*cond)) throw UsageError("no subsystem '" + *cond + "' in the state");

  bool all_converged = true;
  io::Json rows = io::Json::array();
  if (!o.json) io.out << "alpha,quantity,value,converged\n";
  for (const auto& a : o.alphas) {
    const double h = renyi_entropy(rho, a);
    if (o.json) {
      rows.push_back({{"alpha", a.to_string()}, {"quantity", "H"}, {"value", io::number_to_json(h)}, {"converged", true}});
    } else {
      io.out << io::csv_row({a.to_string(), "H", io::format_double(h), "true"}) << '\n';
    }
    io.log << "H_" << a.to_string() << " = " << io::format_double(h) << '\n';
    if (cond) {
      const auto r = conditional_renyi_entropy(rho, *cond, a);
      all_converged = all_converged && r.converged;
      const std::string q = "H(.|" + *cond + ")";
      if (o.json) {
        rows.push_back({{"alpha", a.to_string()}, {"quantity", q}, {"value", io::number_to_json(r.value)},
                        {"converged", r.converged}});
      } else {
        io.out << io::csv_row({a.to_string(), q, io::format_double(r.value), r.converged ? "true" : "false"}) << '\n';
      }
      io.log << "H_" << a.to_string() << "(A|" << *cond << ") = " << io::format_double(r.value)
             << (r.converged ? "" : "  (not converged)") << '\n';
    }
  }
  if (o.json) io.out << rows.dump(2) << '\n';
  return all_converged ? kPass : kViolation;
}

// verify-mdr ------------------------------------------------------------------

struct VerifyOptions {
  std::string state_path;
  std::string x_path;
  std::string z_path;
  std::string channel_path;
  std::vector<AlphaOrder> alphas = {AlphaOrder::one()};
  MdrVariant variant = MdrVariant::Auto;
  bool json = false;
};

inline MdrVariant parse_variant(const std::string& s) {
  if (s == "auto") return MdrVariant::Auto;
  if (s == "classical") return MdrVariant::Classical;
  if (s == "memory") return MdrVariant::MemoryAssisted;
  throw UsageError("variant must be auto, classical or memory");
}

inline int cmd_verify_mdr(const VerifyOptions& o, Streams io) {
  const auto rho = io::load_state(o.state_path);
  const auto x = io::load_povm(o.x_path);
  const auto z = io::load_povm(o.z_path);
  const auto ch = io::load_channel(o.channel_path);
  const MdrScenario base(rho, x, z, ch, o.alphas.front());
  const auto error = predictive_error_result(base);

  bool ok = true;
  io::Json rows = io::Json::array();
  if (!o.json) io.out << io::mdr_csv_header() << '\n';
  for (const auto& a : o.alphas) {
    const auto rep = mdr_report(base.with_alpha(a), o.variant, error);
    const bool holds = rep.gap >= -kGapTolerance;
    ok = ok && holds && rep.converged;
    if (o.json)
      rows.push_back(io::mdr_report_json(rep));
    else
      io.out << io::mdr_csv_row(rep) << '\n';
    io.log << "alpha=" << a.to_string() << "  D=" << io::format_double(rep.disturbance)
           << "  E=" << io::format_double(rep.error) << "  H=" << io::format_double(rep.entropy_term)
           << "  log(1/c)=" << io::format_double(rep.bound) << "  gap=" << io::format_double(rep.gap)
           << (holds ? "" : "  VIOLATED") << (rep.converged ? "" : "  (not converged)") << '\n';
  }
  if (o.json) io.out << rows.dump(2) << '\n';
  return ok ? kPass : kViolation;
}

// qubit-scan --------------------------------------------------------------------

struct QubitScanOptions {
  std::size_t theta_steps = 50;
  std::size_t r_steps = 50;
  bool json = false;
};

inline int cmd_qubit_scan(const QubitScanOptions& o, Streams io) {
  if (o.theta_steps == 0 || o.r_steps == 0) throw UsageError("step counts must be positive");
  const auto rows = qubit::scan_fig2(o.theta_steps, o.r_steps);
  const auto v = qubit::validate_analytic_vs_numeric(o.r_steps, o.theta_steps);

  double worst_edge = 0.0;
  double min_gap = kInf;
  for (const auto& r : rows) {
    min_gap = std::min(min_gap, r.gap);
    if (r.r == 1.0) worst_edge = std::max(worst_edge, std::abs(r.gap));
  }
  const bool ok = v.closed_form_deviation < 1e-9 && v.solver_deviation < 1e-6 && v.converged && worst_edge <= 1e-6 &&
                  min_gap >= -kGapTolerance;

  if (o.json) {
    io::Json j;
    j["rows"] = io::Json::array();
    for (const auto& r : rows)
      j["rows"].push_back({{"theta_rad", r.theta}, {"r", r.r}, {"error_bits", r.error},
                           {"disturbance_bits", r.disturbance}, {"entropy_bits", r.entropy}, {"gap_bits", r.gap}});
    j["summary"] = {{"closed_form_deviation", v.closed_form_deviation},
                    {"solver_deviation", v.solver_deviation},
                    {"r1_max_abs_gap", worst_edge},
                    {"min_gap", min_gap},
                    {"pass", ok}};
    io.out << j.dump(2) << '\n';
  } else {
    io.out << "theta_rad,r,error_bits,disturbance_bits,entropy_bits,gap_bits\n";
    for (const auto& r : rows)
      io.out << io::csv_row({io::format_double(r.theta), io::format_double(r.r), io::format_double(r.error),
                             io::format_double(r.disturbance), io::format_double(r.entropy), io::format_double(r.gap)})
             << '\n';
  }
  io.log << rows.size() << " rows; max |analytic - numeric| = " << io::format_double(v.closed_form_deviation)
         << " (closed forms), " << io::format_double(v.solver_deviation) << " (solver)\n"
         << "max |gap| on r = 1: " << io::format_double(worst_edge) << "; min gap " << io::format_double(min_gap)
         << '\n'
         << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kPass : kViolation;
}

// cv-scan -------------------------------------------------------------------------

struct LambdaGrid {
  double min = 1e-3;
  double max = 1e3;
  std::size_t count = 50;

  [[nodiscard]] std::vector<double> values() const {
    std::vector<double> v;
    for (double e : qubit::linspace(std::log10(min), std::log10(max), count)) v.push_back(std::pow(10.0, e));
    if (count > 1) {
      v.front() = min;
      v.back() = max;
    }
    return v;
  }
};

/// "min:max:N", log-spaced.
inline LambdaGrid parse_lambda_grid(const std::string& text) {
  const auto a = text.find(':');
  const auto b = a == std::string::npos ? a : text.find(':', a + 1);
  if (b == std::string::npos) throw UsageError("lambda grid must look like min:max:N");
  LambdaGrid g;
  try {
    std::size_t pos = 0;
    g.min = std::stod(text.substr(0, a));
    g.max = std::stod(text.substr(a + 1, b - a - 1));
    const long n = std::stol(text.substr(b + 1), &pos);
    if (pos != text.size() - b - 1 || n < 1) throw UsageError("bad point count");
    g.count = static_cast<std::size_t>(n);
  } catch (const std::logic_error&) {
    throw UsageError("lambda grid must look like min:max:N");
  }
  if (!(g.min > 0.0) || !(g.max >= g.min)) throw UsageError("lambda grid needs 0 < min <= max");
  return g;
}

struct CvScanOptions {
  LambdaGrid grid;
  double v_s = 1.0;
  double hbar = 1.0;
  bool json = false;
};

inline int cmd_cv_scan(const CvScanOptions& o, Streams io) {
  if (!(o.v_s > 0.0) || !(o.hbar > 0.0)) throw UsageError("--vs and --hbar must be positive");
  double worst_identity = 0.0;
  bool monotone = true;
  bool nonnegative = true;
  double prev = -kInf;
  io::Json rows = io::Json::array();
  if (!o.json) io.out << "lambda,v_s,hbar,error_bits,disturbance_bits,hP_bits,bound_bits,gap_bits\n";
  for (double lam : o.grid.values()) {
    const cv::GaussianModel m(o.v_s, lam, o.hbar);
    const auto r = cv::cv_mdr_report(m);
    worst_identity = std::max(worst_identity, std::abs(r.gap - cv::cv_gap(lam)));
    monotone = monotone && r.gap >= prev - 1e-12;
    nonnegative = nonnegative && r.gap >= -1e-12;
    prev = r.gap;
    if (o.json) {
      rows.push_back({{"lambda", lam}, {"v_s", o.v_s}, {"hbar", o.hbar}, {"error_bits", r.error},
                      {"disturbance_bits", r.disturbance}, {"hP_bits", r.h_p}, {"bound_bits", r.bound},
                      {"gap_bits", r.gap}});
    } else {
      io.out << io::csv_row({io::format_double(lam), io::format_double(o.v_s), io::format_double(o.hbar),
                             io::format_double(r.error), io::format_double(r.disturbance), io::format_double(r.h_p),
                             io::format_double(r.bound), io::format_double(r.gap)})
             << '\n';
    }
  }
  const bool ok = worst_identity <= 1e-10 && monotone && nonnegative;
  if (o.json) io.out << io::Json{{"rows", rows}, {"max_identity_deviation", worst_identity}, {"pass", ok}}.dump(2) << '\n';
  io.log << o.grid.count << " rows; max |gap - 1/(2 ln 2)(1 + 1/lambda)^-1| = " << io::format_double(worst_identity)
         << "; monotone " << (monotone ? "yes" : "no") << '\n'
         << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kPass : kViolation;
}

// fuzz -----------------------------------------------------------------------------

struct FuzzOptions {
  std::size_t dim = 2;
  std::size_t trials = 1000;
  std::vector<AlphaOrder> alphas = fuzz_alpha_grid();
  std::uint64_t seed = 42;
  std::uint64_t first_stream = 0;
  bool json = false;
};

inline int cmd_fuzz(const FuzzOptions& o, Streams io) {
  if (o.trials == 0) throw UsageError("--trials must be at least 1");
  if (o.dim < 2 || o.dim > 8) throw UsageError("--dim must lie in [2, 8]");
  fuzz::InstanceShape shape;
  shape.dim = o.dim;
  const auto r = fuzz::run_mdr_campaign(shape, o.trials, o.alphas, o.seed, o.first_stream);
  for (const auto& v : r.violations)
    io.log << "violation: seed=" << v.seed << " stream=" << v.stream << " alpha=" << v.alpha
           << " variant=" << (v.memory_assisted ? "memory" : "classical") << " gap=" << io::format_double(v.gap) << '\n';
  if (o.json) {
    io::Json viol = io::Json::array();
    for (const auto& v : r.violations)
      viol.push_back({{"seed", v.seed}, {"stream", v.stream}, {"alpha", v.alpha}, {"memory_assisted", v.memory_assisted},
                      {"gap", v.gap}});
    io.out << io::Json{{"dim", o.dim},           {"trials", r.trials},
                       {"reports", r.reports},    {"seed", o.seed},
                       {"first_stream", o.first_stream}, {"min_gap", io::number_to_json(r.min_gap)},
                       {"nonconverged", r.nonconverged}, {"violations", viol},
                       {"pass", r.passed()}}
                  .dump(2)
           << '\n';
  } else {
    io.out << "dim,trials,reports,seed,first_stream,min_gap,violations,nonconverged\n"
           << io::csv_row({std::to_string(o.dim), std::to_string(r.trials), std::to_string(r.reports),
                           std::to_string(o.seed), std::to_string(o.first_stream), io::format_double(r.min_gap),
                           std::to_string(r.violations.size()), std::to_string(r.nonconverged)})
           << '\n';
  }
  io.log << r.trials << " trials (" << r.reports << " reports), min gap " << io::format_double(r.min_gap) << ", "
         << r.violations.size() << " violations, " << r.nonconverged << " instances with unconverged solvers\n"
         << (r.passed() ? "PASS" : "FAIL") << '\n';
  return r.passed() ? kPass : kViolation;
}

// lemma ----------------------------------------------------------------------------

struct LemmaOptions {
  int which = 1;
  std::size_t trials = 100;   // check 2: states
  std::size_t samples = 20;   // check 2: competitors per state
  std::uint64_t seed = 42;
  bool json = false;
};

struct LemmaLine {
  std::string instance;
  double value = 0;
  double reference = 0;
  double deviation = 0;
  bool pass = true;
};

inline std::vector<LemmaLine> lemma1_suite() {
  const std::vector<std::pair<cv::Gaussian1D, cv::Gaussian1D>> pairs = {
      {{0.0, 1.0}, {0.0, 2.0}}, {{0.0, 1.0}, {1.0, 1.0}}, {{0.5, 0.7}, {-0.3, 1.9}}};
  std::vector<LemmaLine> out;
  for (const auto& [p, q] : pairs) {
    const auto levels = cv::binned_rel_entropy_convergence(p, q, 12);
    bool monotone = true;
    for (std::size_t k = 1; k < levels.size(); ++k)
      monotone = monotone && levels[k].divergence >= levels[k - 1].divergence - 1e-12;
    const double exact = cv::gaussian_kl(p, q);
    LemmaLine l;
    l.instance = "N(" + io::format_double(p.mean) + "," + io::format_double(p.variance) + ") || N(" +
                 io::format_double(q.mean) + "," + io::format_double(q.variance) + ")";
    l.value = levels.back().divergence;
    l.reference = exact;
    l.deviation = std::abs(l.value - exact);
    l.pass = monotone && l.deviation < 1e-3;
    out.push_back(l);
  }
  return out;
}

inline std::vector<LemmaLine> lemma2_suite(std::size_t trials, std::size_t samples, std::uint64_t seed) {
  std::vector<LemmaLine> out;
  for (std::size_t t = 0; t < trials; ++t) {
    random::SeededStream s(seed, t);
    const std::size_t da = 2;
    const std::size_t db = 2 + t % 2;
    const SystemLayout ab({"A", "B"}, {da, db});
    const auto rank = static_cast<std::size_t>(s.uniform_int(1, da * db));
    const auto rho = random::random_density(ab, rank, s);
    const auto rep = check_lemma2_optimality(rho, "B", samples, s);
    out.push_back({"seed=" + std::to_string(seed) + " stream=" + std::to_string(t), rep.min_margin, 0.0,
                   rep.min_margin, rep.holds});
  }
  return out;
}

inline std::vector<LemmaLine> lemma3_suite() {
  std::vector<LemmaLine> out;
  for (double lam : {0.1, 1.0, 10.0})
    for (double vs : {0.5, 1.0, 2.0}) {
      const cv::GaussianModel m(vs, lam);
      LemmaLine l;
      l.instance = "lambda=" + io::format_double(lam) + " v_s=" + io::format_double(vs);
      l.value = cv::covariant_error_numeric(m);
      l.reference = cv::covariant_error(m);
      l.deviation = std::abs(l.value - l.reference);
      l.pass = l.deviation < 1e-4;
      out.push_back(l);
    }
  return out;
}

inline int cmd_lemma(const LemmaOptions& o, Streams io) {
  std::vector<LemmaLine> lines;
  switch (o.which) {
    case 1: lines = lemma1_suite(); break;
    case 2:
      if (o.trials == 0 || o.samples == 0) throw UsageError("--trials and --samples must be positive");
      lines = lemma2_suite(o.trials, o.samples, o.seed);
      break;
    case 3: lines = lemma3_suite(); break;
    default: throw UsageError("--which must be 1, 2 or 3");
  }
  bool ok = true;
  io::Json rows = io::Json::array();
  if (!o.json) io.out << "lemma,instance,value,reference,deviation,pass\n";
  for (const auto& l : lines) {
    ok = ok && l.pass;
    if (o.json) {
      rows.push_back({{"lemma", o.which}, {"instance", l.instance}, {"value", io::number_to_json(l.value)},
                      {"reference", l.reference}, {"deviation", io::number_to_json(l.deviation)}, {"pass", l.pass}});
    } else {
      io.out << io::csv_row({std::to_string(o.which), l.instance, io::format_double(l.value),
                             io::format_double(l.reference), io::format_double(l.deviation), l.pass ? "true" : "false"})
             << '\n';
    }
    if (!l.pass) io.log << "failed: " << l.instance << " value " << io::format_double(l.value) << '\n';
  }
  if (o.json) io.out << rows.dump(2) << '\n';
  io.log << "lemma " << o.which << ": " << lines.size() << " instances, " << (ok ? "PASS" : "FAIL") << '\n';
  return ok ? kPass : kViolation;
}

}  // namespace mdr::cli
