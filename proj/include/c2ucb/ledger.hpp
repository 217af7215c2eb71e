#pragma once

// The moment-matrix ledger: maintains V_t = V_{t-1} + X_t X_t^T together
// with its inverse and log-determinant, and audits per round
//   - the round factor det(I + X^T V^-1 X) (the exact multiplicative growth),
//   - the corrected lower bound 1 + sum ||x||^2_{V^-1},
//   - the eigenvalue structure of the lifted Gram matrix,
// so the determinant equality folklore can be falsified and the relaxed
// inequality and its sharpness conditions checked at runtime.

#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "c2ucb/errors.hpp"
#include "c2ucb/linalg.hpp"
#include "c2ucb/matrix.hpp"

namespace c2ucb {

inline constexpr double kRankTol = 1e-10;        // relative to 1 + max eig
inline constexpr double kColinearityTol = 1e-12;  // relative to norm product
inline constexpr double kLedgerSlack = 1e-9;
inline constexpr int kDefaultRefreshInterval = 64;

struct RoundAudit {
  int round = 0;
  double round_norm_sum = 0.0;  // sum_i ||x_t(i)||^2_{V_{t-1}^-1}
  double round_factor = 1.0;    // det(I + X^T V_{t-1}^-1 X)
  std::vector<double> gram_eigs;  // ascending eigenvalues of X^T V^-1 X
  double gram_trace = 0.0;
  int gram_rank = 0;
  double equality_gap = 0.0;  // round_factor - (1 + round_norm_sum)
};

// Per-round cumulative snapshot, kept alongside the audit for CSV export
// and prefix checks.
struct RoundCumulative {
  double logdet_vt = 0.0;
  double running_lower_logdet = 0.0;
  double sum_norms = 0.0;
};

struct ExpansionResult {
  double factor = 1.0;      // prod (1 + lambda_i), direct
  double factor_esum = 1.0;  // e_0 + e_1 + ... + e_s route
  double truncated = 1.0;   // 1 + e_1, the kept terms
};

// prod(1 + lambda_i) both directly and through elementary symmetric
// polynomials, plus the first-order truncation the corrected bound keeps.
inline ExpansionResult round_factor_by_expansion(std::vector<double> eigs) {
  for (double& v : eigs) {
    if (v < -1e-10) throw NegativeEigenvalue("Gram eigenvalue below -1e-10");
    if (v < 0.0) v = 0.0;
  }
  ExpansionResult r;
  // e-polys of (lambda_1..lambda_s) via iterative root insertion.
  std::vector<double> e(eigs.size() + 1, 0.0);
  e[0] = 1.0;
  std::size_t used = 0;
  for (double v : eigs) {
    ++used;
    for (std::size_t j = used; j >= 1; --j) e[j] += v * e[j - 1];
    r.factor *= 1.0 + v;
  }
  r.factor_esum = 0.0;
  for (double ej : e) r.factor_esum += ej;
  r.truncated = 1.0 + (eigs.empty() ? 0.0 : e[1]);
  return r;
}

struct Claim1Report {
  bool violated = false;
  double lhs_logdet = 0.0;  // log det(V_t), the true side
  double rhs_logdet = 0.0;  // log of det(V) * prod(1 + round norm sums)
  double log_gap = 0.0;     // lhs - rhs; multiplicative gap is exp of this
};

struct EqualityCertificate {
  int gram_rank = 0;
  bool colinear = false;
  double trace_gram = 0.0;
  double u_norm_sq_vinv = 0.0;  // ||u||^2_{V^-1} of the shared direction
  double coeff_norm_sq = 0.0;   // ||a||^2 of the coefficients along u
  double round_factor = 1.0;
  bool equality_holds = false;  // |factor - (1 + trace)| within slack
};

struct BoundReport {
  bool assumptions_met = false;  // lambda_1(V0) >= k and norms <= 1
  double lambda_min_v0 = 0.0;
  double sum_norms = 0.0;
  double two_delta_logdet = 0.0;
  bool holds = false;
  bool per_round_norms_ok = false;  // every round_norm_sum <= 1 + slack
};

struct DriftReport {
  double frobenius_rel = 0.0;
  double inverse_frobenius_rel = 0.0;
  double logdet_rel = 0.0;
};

class MomentLedger {
 public:
  MomentLedger(PosDefMatrix v0, int k_cap,
               double max_context_norm = 1.0,
               int refresh_interval = kDefaultRefreshInterval)
      : v0_(std::move(v0)),
        vt_(v0_.entries()),
        vt_inv_(sym_inverse(v0_).entries()),
        k_cap_(k_cap),
        max_context_norm_(max_context_norm),
        refresh_interval_(refresh_interval),
        logdet_vt_(v0_.logdet()),
        running_lower_logdet_(v0_.logdet()),
        lambda_min_v0_(eigvals_sym(v0_.entries()).front()) {
    if (k_cap_ < 1) throw BadK("k_cap must be >= 1");
  }

  std::size_t dim() const { return v0_.dim(); }
  int t() const { return t_; }
  int k_cap() const { return k_cap_; }
  double max_context_norm() const { return max_context_norm_; }
  const PosDefMatrix& v0() const { return v0_; }
  const Matrix& vt() const { return vt_; }
  const Matrix& vt_inv() const { return vt_inv_; }
  double logdet_v0() const { return v0_.logdet(); }
  double logdet_vt() const { return logdet_vt_; }
  double running_lower_logdet() const { return running_lower_logdet_; }
  double sum_norms() const { return sum_norms_; }
  double lambda_min_v0() const { return lambda_min_v0_; }
  const std::vector<RoundAudit>& audits() const { return audits_; }
  const std::vector<RoundCumulative>& cumulatives() const { return cums_; }
  const std::vector<RoundContexts>& history() const { return history_; }

  // Advance one round. The log-det increment goes through the |S|x|S|
  // identity-plus-Gram route; the d x d matrix is only refactored at
  // refresh points.
  RoundAudit update_round(const RoundContexts& x) {
    if (x.dim != dim()) throw DimensionMismatch("round context dimension");
    if (static_cast<int>(x.size()) > k_cap_)
      throw SuperArmTooLarge("|S_t| exceeds k_cap");
    for (const Vector& col : x.columns)
      if (norm2(col) > max_context_norm_ + 1e-12)
        throw InvalidContexts("context norm exceeds max_context_norm");

    const std::size_t s = x.size();
    const Matrix xm = x.as_matrix();
    const Matrix w = vt_inv_ * xm;                       // V^-1 X, d x s
    const Matrix gram = (xm.transposed() * w).symmetrized();  // s x s

    RoundAudit audit;
    audit.round = t_ + 1;
    for (const Vector& col : x.columns)
      audit.round_norm_sum += dot(col, vt_inv_ * col);
    for (std::size_t i = 0; i < s; ++i) audit.gram_trace += gram(i, i);
    audit.gram_eigs = eigvals_sym(gram);

    // det(I + G) via Cholesky of the small PD matrix; log carried.
    Matrix id_plus(s, s);
    for (std::size_t i = 0; i < s; ++i)
      for (std::size_t j = 0; j < s; ++j)
        id_plus(i, j) = (i == j ? 1.0 : 0.0) + gram(i, j);
    const Matrix lfac = detail::cholesky_lower(id_plus);
    const double log_factor = detail::logdet_from_chol(lfac);
    audit.round_factor = std::exp(log_factor);
    audit.equality_gap = audit.round_factor - (1.0 + audit.round_norm_sum);

    const double max_eig = audit.gram_eigs.empty() ? 0.0 : audit.gram_eigs.back();
    for (double ev : audit.gram_eigs)
      if (ev > kRankTol * (1.0 + max_eig)) ++audit.gram_rank;

    // Woodbury rank-s inverse update:
    //   (V + X X^T)^-1 = V^-1 - W (I + X^T V^-1 X)^-1 W^T,  W = V^-1 X.
    Matrix corr(s, dim());
    {
      Vector rhs(s);
      for (std::size_t i = 0; i < dim(); ++i) {
        for (std::size_t r = 0; r < s; ++r) rhs[r] = w(i, r);
        Vector sol = detail::chol_solve(lfac, rhs);
        for (std::size_t r = 0; r < s; ++r) corr(r, i) = sol[r];
      }
    }
    vt_inv_ = (vt_inv_ - w * corr).symmetrized();
    for (const Vector& col : x.columns) vt_.add_outer(col);

    logdet_vt_ += log_factor;
    running_lower_logdet_ += std::log1p(audit.round_norm_sum);
    sum_norms_ += audit.round_norm_sum;
    ++t_;
    history_.push_back(x);
    audits_.push_back(audit);
    cums_.push_back({logdet_vt_, running_lower_logdet_, sum_norms_});

    if (refresh_interval_ > 0 && t_ % refresh_interval_ == 0) refresh();
    return audits_.back();
  }

  // Refactor V_t from scratch to cap incremental drift.
  void refresh() {
    PosDefMatrix fresh(vt_.symmetrized());
    vt_ = fresh.entries();
    vt_inv_ = sym_inverse(fresh).entries();
    logdet_vt_ = fresh.logdet();
  }

  Claim1Report claim1_violated() const {
    if (t_ == 0) throw EmptyLedger("no rounds recorded");
    Claim1Report r;
    r.lhs_logdet = logdet_vt_;
    r.rhs_logdet = running_lower_logdet_;
    r.log_gap = r.lhs_logdet - r.rhs_logdet;
    r.violated = r.log_gap > kLedgerSlack;
    return r;
  }

  BoundReport sum_bound_check() const {
    BoundReport r;
    r.lambda_min_v0 = lambda_min_v0_;
    r.sum_norms = sum_norms_;
    r.two_delta_logdet = 2.0 * (logdet_vt_ - v0_.logdet());
    r.assumptions_met = lambda_min_v0_ >= static_cast<double>(k_cap_) - 1e-12 &&
                        max_context_norm_ <= 1.0 + 1e-12;
    if (!r.assumptions_met) return r;
    r.holds = r.sum_norms <= r.two_delta_logdet + kLedgerSlack;
    r.per_round_norms_ok = true;
    for (const RoundAudit& a : audits_)
      if (a.round_norm_sum > 1.0 + kLedgerSlack) r.per_round_norms_ok = false;
    return r;
  }

  DriftReport rebuild_and_verify() const {
    Matrix rebuilt = v0_.entries();
    for (const RoundContexts& x : history_)
      for (const Vector& col : x.columns) rebuilt.add_outer(col);
    PosDefMatrix fresh(rebuilt.symmetrized());
    const Matrix fresh_inv = sym_inverse(fresh).entries();

    DriftReport r;
    const double scale = std::max(1.0, fresh.entries().frobenius_norm());
    r.frobenius_rel = (vt_ - fresh.entries()).frobenius_norm() / scale;
    const double inv_scale = std::max(1.0, fresh_inv.frobenius_norm());
    r.inverse_frobenius_rel = (vt_inv_ - fresh_inv).frobenius_norm() / inv_scale;
    r.logdet_rel = std::abs(logdet_vt_ - fresh.logdet()) /
                   std::max(1.0, std::abs(fresh.logdet()));
    if (r.frobenius_rel > 1e-8 || r.inverse_frobenius_rel > 1e-8 ||
        r.logdet_rel > 1e-8)
      throw DriftExceeded("ledger drifted beyond 1e-8 from rebuild");
    return r;
  }

 private:
  PosDefMatrix v0_;
  Matrix vt_;
  Matrix vt_inv_;
  int k_cap_;
  double max_context_norm_;
  int refresh_interval_;
  int t_ = 0;
  double logdet_vt_;
  double running_lower_logdet_;
  double sum_norms_ = 0.0;
  double lambda_min_v0_;
  std::vector<RoundAudit> audits_;
  std::vector<RoundCumulative> cums_;
  std::vector<RoundContexts> history_;
};

// Sharpness certificate for one round: when the played columns are pairwise
// co-linear (x_i = a_i u), the lifted Gram matrix is ||u||^2_{V^-1} a a^T,
// rank <= 1, and the round factor meets the lower bound exactly.
inline EqualityCertificate equality_certificate(const RoundContexts& x,
                                                const PosDefMatrix& vprev_inv) {
  EqualityCertificate cert;
  const Matrix xm = x.as_matrix();
  const Matrix gram =
      (xm.transposed() * (vprev_inv.entries() * xm)).symmetrized();
  const std::vector<double> eigs = eigvals_sym(gram);
  const double max_eig = eigs.empty() ? 0.0 : eigs.back();
  for (double ev : eigs)
    if (ev > kRankTol * (1.0 + max_eig)) ++cert.gram_rank;
  for (std::size_t i = 0; i < gram.rows(); ++i) cert.trace_gram += gram(i, i);
  cert.round_factor = 1.0;
  for (double ev : eigs) cert.round_factor *= 1.0 + std::max(ev, 0.0);
  cert.equality_holds = std::abs(cert.round_factor - (1.0 + cert.trace_gram)) <=
                        kLedgerSlack * cert.round_factor;

  // Pairwise 2x2 minors of the column matrix decide co-linearity.
  cert.colinear = true;
  for (std::size_t i = 0; i < x.size() && cert.colinear; ++i) {
    for (std::size_t j = i + 1; j < x.size() && cert.colinear; ++j) {
      const double scale = norm2(x.columns[i]) * norm2(x.columns[j]);
      for (std::size_t p = 0; p < x.dim && cert.colinear; ++p)
        for (std::size_t q = p + 1; q < x.dim; ++q) {
          const double minor = x.columns[i][p] * x.columns[j][q] -
                               x.columns[i][q] * x.columns[j][p];
          if (std::abs(minor) > kColinearityTol * std::max(scale, 1e-300)) {
            cert.colinear = false;
            break;
          }
        }
    }
  }

  if (cert.colinear) {
    // u = direction of the largest column; a_i = <x_i, u>.
    std::size_t best = 0;
    for (std::size_t i = 1; i < x.size(); ++i)
      if (norm2(x.columns[i]) > norm2(x.columns[best])) best = i;
    const double bn = norm2(x.columns[best]);
    if (bn > 0.0) {
      Vector u = x.columns[best];
      for (double& v : u) v /= bn;
      cert.u_norm_sq_vinv = mahalanobis_sq(u, vprev_inv);
      for (const Vector& col : x.columns) {
        const double a = dot(col, u);
        cert.coeff_norm_sq += a * a;
      }
    }
  }
  return cert;
}

inline const char* kAuditCsvHeader =
    "t,round_norm_sum,round_factor,gram_rank,equality_gap,logdet_Vt,"
    "running_lower_logdet,sum_norms,two_delta_logdet";

}  // namespace c2ucb
