#pragma once

// The fixed counterexample audit: V = 1.2 I_2, three context columns in one
// round. The folklore product formula gives 2.892 while det(V_1) = 3.1346,
// so the equality fails and only the inequality survives.

#include <cmath>

#include "c2ucb/env.hpp"
#include "c2ucb/ledger.hpp"
#include "c2ucb/linalg.hpp"

namespace c2ucb {

inline constexpr double kCounterexampleLhs = 2.892;    // det(V)(1 + sum norms)
inline constexpr double kCounterexampleRhs = 3.1346;   // det(V_1)
inline constexpr double kAuditAbsTol = 1e-9;

struct AuditReport {
  double lhs = 0.0;  // product lower bound, exp(running_lower_logdet)
  double rhs = 0.0;  // det(V_1), exp(logdet_Vt)
  bool lemma1_holds = false;
  bool claim1_holds = true;
  RoundAudit audit;
  bool values_match = false;  // both sides hit the expected constants
  bool passed = false;
};

inline bool audit_values_ok(double lhs, double rhs) {
  return std::abs(lhs - kCounterexampleLhs) <= kAuditAbsTol &&
         std::abs(rhs - kCounterexampleRhs) <= kAuditAbsTol;
}

inline AuditReport run_counterexample_audit() {
  MomentLedger ledger(PosDefMatrix::scaled_identity(2, 1.2), 3);
  RoundContexts x(2, {0, 1, 2}, counterexample_contexts());
  AuditReport r;
  r.audit = ledger.update_round(x);
  r.lhs = std::exp(ledger.running_lower_logdet());
  r.rhs = std::exp(ledger.logdet_vt());
  const Claim1Report c1 = ledger.claim1_violated();
  r.claim1_holds = !c1.violated;
  r.lemma1_holds = ledger.logdet_vt() >=
                   ledger.running_lower_logdet() - kLedgerSlack;
  r.values_match = audit_values_ok(r.lhs, r.rhs);
  r.passed = r.values_match && r.lemma1_holds && !r.claim1_holds;
  return r;
}

}  // namespace c2ucb
