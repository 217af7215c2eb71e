#pragma once

// Randomized property suites over the ledger: the corrected determinant
// inequality, the trace identity, telescoping, sharpness in the co-linear
// and single-play regimes, and the summed-norm log-det bound. Shared by the
// CLI `verify` command and the acceptance suite.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "c2ucb/ledger.hpp"
#include "c2ucb/linalg.hpp"
#include "c2ucb/rng.hpp"

namespace c2ucb {

struct TrialSpec {
  int d = 2;
  int k = 2;
  int n = 10;
  std::uint64_t seed = 0;
  bool colinear = false;
};

inline void to_json(nlohmann::json& j, const TrialSpec& s) {
  j = nlohmann::json{{"d", s.d},
                     {"k", s.k},
                     {"n", s.n},
                     {"seed", s.seed},
                     {"colinear", s.colinear}};
}

inline void from_json(const nlohmann::json& j, TrialSpec& s) {
  j.at("d").get_to(s.d);
  j.at("k").get_to(s.k);
  j.at("n").get_to(s.n);
  s.seed = j.at("seed").get<std::uint64_t>();
  j.at("colinear").get_to(s.colinear);
}

// One round of synthetic contexts for a trial instance. Substream (seed, t)
// so the stream is reproducible round by round.
inline RoundContexts trial_round_contexts(const TrialSpec& spec, int t,
                                          bool colinear, int size) {
  CounterRng rng(spec.seed, static_cast<std::uint64_t>(t));
  std::vector<Vector> cols;
  std::vector<int> ids;
  if (colinear) {
    const Vector u = rng.unit_sphere(spec.d);
    for (int i = 0; i < size; ++i) {
      const double a = rng.next_unit();
      Vector x = u;
      for (double& v : x) v *= a;
      cols.push_back(std::move(x));
      ids.push_back(i);
    }
  } else {
    for (int i = 0; i < size; ++i) {
      cols.push_back(rng.unit_ball(static_cast<std::size_t>(spec.d)));
      ids.push_back(i);
    }
  }
  return RoundContexts(static_cast<std::size_t>(spec.d), std::move(ids),
                       std::move(cols));
}

// Ledger with V = k * I_d, so lambda_1(V) >= k holds by construction and the
// summed-norm bound's assumptions are met.
inline MomentLedger trial_ledger(const TrialSpec& spec) {
  return MomentLedger(
      PosDefMatrix::scaled_identity(static_cast<std::size_t>(spec.d),
                                    static_cast<double>(spec.k)),
      spec.k);
}

using PropertyChecks = std::vector<std::pair<std::string, bool>>;

inline PropertyChecks run_single_trial(const TrialSpec& spec) {
  PropertyChecks out;
  auto relok = [](double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
  };

  MomentLedger ledger = trial_ledger(spec);
  bool trace_ok = true, expansion_ok = true, sharpness_main = true;
  for (int t = 1; t <= spec.n; ++t) {
    const RoundContexts x = trial_round_contexts(spec, t, spec.colinear, spec.k);
    const RoundAudit a = ledger.update_round(x);
    double eig_sum = 0.0;
    for (double ev : a.gram_eigs) eig_sum += ev;
    trace_ok = trace_ok && relok(a.round_norm_sum, a.gram_trace, 1e-9) &&
               relok(a.round_norm_sum, eig_sum, 1e-9);
    const ExpansionResult ex = round_factor_by_expansion(a.gram_eigs);
    expansion_ok = expansion_ok && relok(ex.factor, ex.factor_esum, 1e-10) &&
                   relok(a.round_factor, ex.factor, 1e-9) &&
                   ex.factor >= ex.truncated - 1e-12;
    if (spec.colinear)
      sharpness_main = sharpness_main &&
                       std::abs(a.equality_gap) <= kLedgerSlack * a.round_factor;
  }

  bool lemma1_ok = true, bound_ok = true, monotone_ok = true;
  double prev_logdet = ledger.logdet_v0();
  for (const RoundCumulative& c : ledger.cumulatives()) {
    lemma1_ok = lemma1_ok &&
                c.logdet_vt >= c.running_lower_logdet - kLedgerSlack;
    bound_ok = bound_ok && c.sum_norms <= 2.0 * (c.logdet_vt -
                                                 ledger.logdet_v0()) +
                               kLedgerSlack;
    monotone_ok = monotone_ok && c.logdet_vt >= prev_logdet - 1e-12;
    prev_logdet = c.logdet_vt;
  }
  const BoundReport br = ledger.sum_bound_check();
  bound_ok = bound_ok && br.assumptions_met && br.holds && br.per_round_norms_ok;

  // Telescoping: recompute the running lower bound from the audits alone.
  double telescope = ledger.logdet_v0();
  for (const RoundAudit& a : ledger.audits())
    telescope += std::log1p(a.round_norm_sum);
  const bool telescoping_ok =
      relok(telescope, ledger.running_lower_logdet(), 1e-10);

  out.emplace_back("lemma1", lemma1_ok);
  out.emplace_back("trace_identity", trace_ok);
  out.emplace_back("telescoping", telescoping_ok);
  out.emplace_back("expansion", expansion_ok);
  out.emplace_back("sum_bound", bound_ok);
  out.emplace_back("monotone_logdet", monotone_ok);

  // Sharpness, co-linear regime: equality every round, no Claim 1 violation.
  {
    TrialSpec s = spec;
    s.colinear = true;
    MomentLedger led = trial_ledger(s);
    bool ok = spec.colinear ? sharpness_main : true;
    for (int t = 1; t <= s.n; ++t) {
      const RoundContexts x = trial_round_contexts(s, t, true, s.k);
      const EqualityCertificate cert =
          equality_certificate(x, PosDefMatrix(led.vt_inv().symmetrized()));
      const RoundAudit a = led.update_round(x);
      ok = ok && cert.colinear && cert.gram_rank <= 1 &&
           std::abs(a.equality_gap) <= kLedgerSlack * a.round_factor;
    }
    ok = ok && !led.claim1_violated().violated;
    out.emplace_back("sharpness_colinear", ok);
  }

  // Sharpness, single-play regime (|S_t| = 1).
  {
    TrialSpec s = spec;
    s.k = 1;
    MomentLedger led(PosDefMatrix::scaled_identity(
                         static_cast<std::size_t>(s.d), 1.0),
                     1);
    bool ok = true;
    for (int t = 1; t <= s.n; ++t) {
      const RoundContexts x = trial_round_contexts(s, t, false, 1);
      const RoundAudit a = led.update_round(x);
      ok = ok && a.gram_rank <= 1 &&
           std::abs(a.equality_gap) <= kLedgerSlack * a.round_factor;
    }
    ok = ok && !led.claim1_violated().violated;
    out.emplace_back("sharpness_single_play", ok);
  }

  // Claim 1 strictness. Generic contexts with k >= 2 should violate the
  // folklore equality within 10 rounds; co-linear contexts never do.
  if (spec.colinear) {
    out.emplace_back("claim1_zero_violations",
                     !ledger.claim1_violated().violated);
  } else {
    TrialSpec s = spec;
    s.d = std::max(s.d, 2);
    s.k = std::max(s.k, 2);
    MomentLedger led = trial_ledger(s);
    bool violated = false;
    for (int t = 1; t <= 10 && !violated; ++t) {
      led.update_round(trial_round_contexts(s, t, false, s.k));
      violated = led.claim1_violated().violated;
    }
    out.emplace_back("claim1_strict", violated);
  }

  return out;
}

struct PropertyRow {
  std::string property;
  int trials = 0;
  int passes = 0;
};

struct VerifySummary {
  std::vector<PropertyRow> rows;
  std::optional<TrialSpec> first_failure;
  std::string failed_property;
  bool all_passed = true;
};

struct VerifyOptions {
  int trials = 100;
  int d_lo = 2, d_hi = 6;
  int k_lo = 1, k_hi = 4;
  int n_lo = 1, n_hi = 20;
  std::uint64_t seed = 0;
  bool colinear_only = false;
};

inline TrialSpec draw_trial_spec(const VerifyOptions& opt, int trial_index) {
  CounterRng rng(opt.seed, static_cast<std::uint64_t>(trial_index));
  TrialSpec s;
  s.d = static_cast<int>(rng.next_int(opt.d_lo, opt.d_hi));
  s.k = static_cast<int>(rng.next_int(opt.k_lo, opt.k_hi));
  s.n = static_cast<int>(rng.next_int(opt.n_lo, opt.n_hi));
  s.seed = rng.next_u64();
  s.colinear = opt.colinear_only;
  return s;
}

inline VerifySummary run_property_suite(const VerifyOptions& opt) {
  VerifySummary summary;
  std::map<std::string, PropertyRow> rows;
  for (int i = 0; i < opt.trials; ++i) {
    const TrialSpec spec = draw_trial_spec(opt, i);
    for (const auto& [name, ok] : run_single_trial(spec)) {
      PropertyRow& row = rows[name];
      row.property = name;
      ++row.trials;
      if (ok) {
        ++row.passes;
      } else if (!summary.first_failure) {
        summary.first_failure = spec;
        summary.failed_property = name;
      }
    }
  }
  for (auto& [name, row] : rows) {
    if (row.passes != row.trials) summary.all_passed = false;
    summary.rows.push_back(row);
  }
  return summary;
}

}  // namespace c2ucb
