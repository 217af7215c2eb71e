#pragma once

// CSV emission. Numbers are printed with 9 significant digits; column
// orders are fixed.

#include <cstdio>
#include <ostream>
#include <string>

#include "c2ucb/ledger.hpp"

namespace c2ucb {

inline std::string fmt9(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

inline void write_audit_csv(const MomentLedger& ledger, std::ostream& os) {
  os << kAuditCsvHeader << "\n";
  const auto& audits = ledger.audits();
  const auto& cums = ledger.cumulatives();
  for (std::size_t i = 0; i < audits.size(); ++i) {
    const RoundAudit& a = audits[i];
    const RoundCumulative& c = cums[i];
    os << a.round << ',' << fmt9(a.round_norm_sum) << ','
       << fmt9(a.round_factor) << ',' << a.gram_rank << ','
       << fmt9(a.equality_gap) << ',' << fmt9(c.logdet_vt) << ','
       << fmt9(c.running_lower_logdet) << ',' << fmt9(c.sum_norms) << ','
       << fmt9(2.0 * (c.logdet_vt - ledger.logdet_v0())) << "\n";
  }
}

}  // namespace c2ucb
