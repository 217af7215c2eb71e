// c2ucb_lab: counterexample audit, randomized property verification sweeps,
// and bandit simulations. CSV for per-round data, JSON for summaries,
// optional SVG line plots.
//
// Exit codes: 0 success, 2 property failure, 3 config error, 4 I/O error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "c2ucb/audit.hpp"
#include "c2ucb/csv.hpp"
#include "c2ucb/env.hpp"
#include "c2ucb/simulate.hpp"
#include "c2ucb/svg.hpp"
#include "c2ucb/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFailed = 2;
constexpr int kExitConfigError = 3;
constexpr int kExitIoError = 4;

struct Range {
  int lo = 0;
  int hi = 0;
};

Range parse_range(const std::string& s) {
  const auto pos = s.find("..");
  if (pos == std::string::npos)
    throw c2ucb::ConfigError("range must be A..B, got: " + s);
  Range r;
  r.lo = std::stoi(s.substr(0, pos));
  r.hi = std::stoi(s.substr(pos + 2));
  if (r.lo > r.hi) throw c2ucb::ConfigError("empty range: " + s);
  return r;
}

std::optional<std::uint64_t> env_seed_override() {
  if (const char* v = std::getenv("C2UCB_LAB_SEED"))
    return std::stoull(v);
  return std::nullopt;
}

int cmd_audit(bool as_json) {
  const c2ucb::AuditReport r = c2ucb::run_counterexample_audit();
  if (as_json) {
    nlohmann::json j{{"lhs", r.lhs},
                     {"rhs", r.rhs},
                     {"lemma1_holds", r.lemma1_holds},
                     {"claim1_holds", r.claim1_holds}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "counterexample audit (V = 1.2 I_2, three contexts, one round)\n"
              << "  det(V) * prod(1 + sum ||x||^2) = " << c2ucb::fmt9(r.lhs)
              << "  (expected 2.892)\n"
              << "  det(V_1)                       = " << c2ucb::fmt9(r.rhs)
              << "  (expected 3.1346)\n"
              << "  claim 1 (equality) holds: " << (r.claim1_holds ? "yes" : "no")
              << "\n"
              << "  lemma 1 (inequality) holds: "
              << (r.lemma1_holds ? "yes" : "no") << "\n"
              << "  audit " << (r.passed ? "PASSED" : "FAILED") << "\n";
  }
  return r.passed ? kExitOk : kExitPropertyFailed;
}

int cmd_verify(const c2ucb::VerifyOptions& opt, const std::string& out_path,
               const std::string& replay_path) {
  if (!replay_path.empty()) {
    std::ifstream in(replay_path);
    if (!in) throw c2ucb::IoError("cannot open replay file: " + replay_path);
    nlohmann::json j;
    in >> j;
    const auto spec = j.at("spec").get<c2ucb::TrialSpec>();
    const std::string wanted = j.value("property", "");
    bool all_ok = true;
    for (const auto& [name, ok] : c2ucb::run_single_trial(spec)) {
      if (!wanted.empty() && name != wanted) continue;
      std::cout << name << ": " << (ok ? "pass" : "FAIL") << "\n";
      all_ok = all_ok && ok;
    }
    return all_ok ? kExitOk : kExitPropertyFailed;
  }

  const c2ucb::VerifySummary summary = c2ucb::run_property_suite(opt);
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw c2ucb::IoError("cannot open output file: " + out_path);
    os = &file;
  }
  *os << "property,trials,passes\n";
  for (const c2ucb::PropertyRow& row : summary.rows)
    *os << row.property << ',' << row.trials << ',' << row.passes << "\n";

  if (!summary.all_passed) {
    nlohmann::json replay{{"spec", *summary.first_failure},
                          {"property", summary.failed_property}};
    const std::string path = "replay.json";
    std::ofstream rf(path);
    rf << replay.dump(2) << "\n";
    std::cerr << "property '" << summary.failed_property
              << "' failed; replay instance written to " << path << "\n";
    return kExitPropertyFailed;
  }
  return kExitOk;
}

int cmd_simulate(const std::string& config_path, const std::string& out_dir,
                 bool emit_svg, double alpha) {
  std::ifstream in(config_path);
  if (!in) throw c2ucb::IoError("cannot open config file: " + config_path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw c2ucb::ConfigError(std::string("bad config JSON: ") + e.what());
  }
  c2ucb::EnvConfig cfg;
  try {
    cfg = j.get<c2ucb::EnvConfig>();
  } catch (const nlohmann::json::exception& e) {
    throw c2ucb::ConfigError(std::string("bad config: ") + e.what());
  }
  if (const auto seed = env_seed_override()) cfg.seed = *seed;

  const c2ucb::SimResult res = c2ucb::run_simulation(cfg, alpha);

  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw c2ucb::IoError("cannot create output dir: " + out_dir);

  {
    std::ofstream csv(fs::path(out_dir) / "rounds.csv");
    if (!csv) throw c2ucb::IoError("cannot write rounds.csv");
    c2ucb::write_round_csv(res, csv);
  }
  {
    nlohmann::json summary{
        {"config", cfg},
        {"final_cum_regret", res.final_cum_regret},
        {"sum_norms", res.sum_norms.empty() ? 0.0 : res.sum_norms.back()},
        {"two_delta_logdet",
         res.two_delta_logdet.empty() ? 0.0 : res.two_delta_logdet.back()}};
    std::ofstream sj(fs::path(out_dir) / "summary.json");
    if (!sj) throw c2ucb::IoError("cannot write summary.json");
    sj << summary.dump(2) << "\n";
  }
  if (emit_svg) {
    std::ofstream regret_svg(fs::path(out_dir) / "regret.svg");
    if (!regret_svg) throw c2ucb::IoError("cannot write regret.svg");
    c2ucb::write_line_chart(regret_svg, "cumulative regret",
                            {{"cum_regret", "#1f77b4", res.cum_regret}});
    std::ofstream bound_svg(fs::path(out_dir) / "bound.svg");
    if (!bound_svg) throw c2ucb::IoError("cannot write bound.svg");
    c2ucb::write_line_chart(
        bound_svg, "summed norms vs 2 delta logdet",
        {{"sum_norms", "#d62728", res.sum_norms},
         {"two_delta_logdet", "#2ca02c", res.two_delta_logdet}});
  }
  std::cout << "wrote " << out_dir << "/rounds.csv (" << res.logs.size()
            << " rounds), final cumulative regret "
            << c2ucb::fmt9(res.final_cum_regret) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"C2UCB moment-ledger lab"};
  app.require_subcommand(1);

  auto* audit = app.add_subcommand("audit", "run the fixed counterexample audit");
  bool audit_json = false;
  audit->add_flag("--json", audit_json, "machine-readable report");

  auto* verify = app.add_subcommand("verify", "randomized property sweeps");
  int trials = 1000;
  std::string d_range = "2..6", k_range = "1..4", n_range = "1..20";
  std::uint64_t seed = 0;
  bool colinear_only = false;
  std::string verify_out, replay_path;
  verify->add_option("--trials", trials, "number of random instances");
  verify->add_option("--d-range", d_range, "dimension range A..B");
  verify->add_option("--k-range", k_range, "super-arm size range A..B");
  verify->add_option("--n-range", n_range, "round-count range A..B");
  verify->add_option("--seed", seed, "master seed");
  verify->add_flag("--colinear-only", colinear_only,
                   "co-linear contexts in every instance");
  verify->add_option("--out", verify_out, "summary CSV path (default stdout)");
  verify->add_option("--replay", replay_path,
                     "re-run a failing instance from a replay file");

  auto* simulate = app.add_subcommand("simulate", "run a bandit simulation");
  std::string config_path, out_dir;
  bool emit_svg = false;
  double alpha = 1.0;
  simulate->add_option("--config", config_path, "EnvConfig JSON file")
      ->required();
  simulate->add_option("--out", out_dir, "output directory")->required();
  simulate->add_flag("--svg", emit_svg, "also emit SVG line plots");
  simulate->add_option("--alpha", alpha, "exploration width (default 1.0)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (audit->parsed()) return cmd_audit(audit_json);
    if (verify->parsed()) {
      c2ucb::VerifyOptions opt;
      if (trials < 1) throw c2ucb::ConfigError("trials must be >= 1");
      opt.trials = trials;
      const Range dr = parse_range(d_range), kr = parse_range(k_range),
                  nr = parse_range(n_range);
      opt.d_lo = dr.lo;
      opt.d_hi = dr.hi;
      opt.k_lo = kr.lo;
      opt.k_hi = kr.hi;
      opt.n_lo = nr.lo;
      opt.n_hi = nr.hi;
      opt.seed = env_seed_override().value_or(seed);
      opt.colinear_only = colinear_only;
      return cmd_verify(opt, verify_out, replay_path);
    }
    if (simulate->parsed())
      return cmd_simulate(config_path, out_dir, emit_svg, alpha);
  } catch (const c2ucb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const c2ucb::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIoError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPropertyFailed;
  }
  return kExitConfigError;
}
