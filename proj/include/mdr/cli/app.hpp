#pragma once

// Argument parsing for the `mdr` tool. Kept in a header so the tests can
// drive the whole front end with string streams.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mdr/cli/commands.hpp"

namespace mdr::cli {

inline std::uint64_t parse_seed(const std::string& text) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text.front() == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &pos, 0);
  } catch (const std::logic_error&) {
    throw UsageError("seed must be a non-negative integer, got '" + text + "'");
  }
  if (pos != text.size()) throw UsageError("seed must be a non-negative integer, got '" + text + "'");
  return v;
}

/// --seed wins over MDR_SEED, which wins over 42.
inline std::uint64_t resolve_seed(const std::string& flag) {
  if (!flag.empty()) return parse_seed(flag);
  if (const char* env = std::getenv("MDR_SEED"); env && *env) return parse_seed(env);
  return 42;
}

inline std::vector<AlphaOrder> alphas_or_throw(const std::string& text) {
  try {
    return parse_alpha_list(text);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

/// Runs the tool. Machine output goes to `out` (or the --out file), the
/// summary and diagnostics to `err`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Measurement-disturbance relation toolkit"};
  app.require_subcommand(1);

  std::string out_path;
  bool json = false;
  auto add_common = [&](CLI::App* sc) {
    sc->add_option("--out", out_path, "Write machine output to this file instead of stdout");
    sc->add_flag("--json", json, "Emit JSON instead of CSV");
  };

  std::string alpha_text = "1";
  std::string seed_text;

  EntropyOptions eo;
  std::string condition;
  auto* entropy = app.add_subcommand("entropy", "Renyi entropies of a state file");
  entropy->add_option("--state", eo.state_path, "State JSON")->required();
  entropy->add_option("--alpha", alpha_text, "Order(s), comma-separated: 0.5, 2, inf, ...");
  entropy->add_option("--condition", condition, "Subsystem to condition on (default: last)");
  add_common(entropy);

  VerifyOptions vo;
  std::string variant = "auto";
  auto* verify = app.add_subcommand("verify-mdr", "Evaluate the relation for one scenario");
  verify->add_option("--state", vo.state_path, "Input state on S or S,R")->required();
  verify->add_option("--x", vo.x_path, "POVM X")->required();
  verify->add_option("--z", vo.z_path, "POVM Z")->required();
  verify->add_option("--channel", vo.channel_path, "Interaction S -> S,M")->required();
  verify->add_option("--alpha", alpha_text, "Order(s), comma-separated");
  verify->add_option("--variant", variant, "auto | classical | memory");
  add_common(verify);

  QubitScanOptions qo;
  auto* qscan = app.add_subcommand("qubit-scan", "Weak-measurement scan over theta and r");
  qscan->add_option("--theta-steps", qo.theta_steps, "Grid points in theta on [0, pi/2]");
  qscan->add_option("--r-steps", qo.r_steps, "Grid points in r on [0, 1]");
  add_common(qscan);

  CvScanOptions co;
  std::string grid_text = "1e-3:1e3:50";
  auto* cvscan = app.add_subcommand("cv-scan", "Gaussian position measurement scan over lambda");
  cvscan->add_option("--lambda-grid", grid_text, "min:max:N, log-spaced");
  cvscan->add_option("--vs", co.v_s, "Position variance of the input");
  cvscan->add_option("--hbar", co.hbar, "Value of hbar");
  add_common(cvscan);

  FuzzOptions fo;
  std::string fuzz_alpha;
  auto* fuzz = app.add_subcommand("fuzz", "Random instances of the relation");
  fuzz->add_option("--dim", fo.dim, "Dimension of S");
  fuzz->add_option("--trials", fo.trials, "Number of random instances");
  fuzz->add_option("--alpha", fuzz_alpha, "Order(s); default 0.5,0.75,1,2,inf");
  fuzz->add_option("--seed", seed_text, "Master seed (default: $MDR_SEED, else 42)");
  fuzz->add_option("--stream", fo.first_stream, "First stream id");
  add_common(fuzz);

  LemmaOptions lo;
  auto* lemma = app.add_subcommand("lemma", "Numerical checks 1-3 of the supporting results");
  lemma->add_option("--which", lo.which, "1, 2 or 3")->required();
  lemma->add_option("--trials", lo.trials, "Check 2: number of random states");
  lemma->add_option("--samples", lo.samples, "Check 2: competitors per state");
  lemma->add_option("--seed", seed_text, "Master seed (default: $MDR_SEED, else 42)");
  add_common(lemma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kPass;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  std::unique_ptr<std::ofstream> file;
  std::ostream* sink = &out;
  if (!out_path.empty()) {
    file = std::make_unique<std::ofstream>(out_path);
    if (!*file) {
      err << "error: cannot write '" << out_path << "'\n";
      return kUsage;
    }
    sink = file.get();
  }
  const Streams io{*sink, err};

  try {
    if (entropy->parsed()) {
      eo.alphas = alphas_or_throw(alpha_text);
      if (!condition.empty()) eo.condition_on = condition;
      eo.json = json;
      return cmd_entropy(eo, io);
    }
    if (verify->parsed()) {
      vo.alphas = alphas_or_throw(alpha_text);
      vo.variant = parse_variant(variant);
      vo.json = json;
      return cmd_verify_mdr(vo, io);
    }
    if (qscan->parsed()) {
      qo.json = json;
      return cmd_qubit_scan(qo, io);
    }
    if (cvscan->parsed()) {
      co.grid = parse_lambda_grid(grid_text);
      co.json = json;
      return cmd_cv_scan(co, io);
    }
    if (fuzz->parsed()) {
      if (!fuzz_alpha.empty()) fo.alphas = alphas_or_throw(fuzz_alpha);
      fo.seed = resolve_seed(seed_text);
      fo.json = json;
      return cmd_fuzz(fo, io);
    }
    if (lemma->parsed()) {
      lo.seed = resolve_seed(seed_text);
      lo.json = json;
      return cmd_lemma(lo, io);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    // malformed input files and inconsistent scenarios
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace mdr::cli
