#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "c2ucb/csv.hpp"
#include "c2ucb/env.hpp"
#include "c2ucb/ledger.hpp"
#include "c2ucb/rng.hpp"
#include "oracles.hpp"

using namespace c2ucb;

namespace {

RoundContexts counterexample_round() {
  return RoundContexts(2, {0, 1, 2}, counterexample_contexts());
}

MomentLedger counterexample_ledger() {
  MomentLedger ledger(PosDefMatrix::scaled_identity(2, 1.2), 3);
  ledger.update_round(counterexample_round());
  return ledger;
}

RoundContexts random_round(CounterRng& rng, std::size_t d, int size,
                           bool colinear = false) {
  std::vector<Vector> cols;
  std::vector<int> ids;
  if (colinear) {
    const Vector u = rng.unit_sphere(d);
    for (int i = 0; i < size; ++i) {
      Vector x = u;
      const double a = rng.next_unit();
      for (double& v : x) v *= a;
      cols.push_back(std::move(x));
      ids.push_back(i);
    }
  } else {
    for (int i = 0; i < size; ++i) {
      cols.push_back(rng.unit_ball(d));
      ids.push_back(i);
    }
  }
  return RoundContexts(d, std::move(ids), std::move(cols));
}

}  // namespace

TEST_CASE("new ledger initial state") {
  MomentLedger a(PosDefMatrix::scaled_identity(2, 1.2), 3);
  CHECK(a.t() == 0);
  CHECK(std::exp(a.logdet_vt()) == doctest::Approx(1.44).epsilon(1e-12));
  CHECK(a.sum_norms() == 0.0);
  CHECK(a.running_lower_logdet() == a.logdet_v0());
  CHECK(a.audits().empty());

  MomentLedger b(PosDefMatrix(Matrix::identity(3)), 1);
  CHECK(b.logdet_vt() == doctest::Approx(0.0));

  Matrix d23(2, 2);
  d23(0, 0) = 2;
  d23(1, 1) = 3;
  MomentLedger c(PosDefMatrix(d23), 2);
  CHECK(c.logdet_vt() == doctest::Approx(std::log(6.0)).epsilon(1e-12));
}

TEST_CASE("counterexample round audit values") {
  MomentLedger ledger = counterexample_ledger();
  const RoundAudit& a = ledger.audits().front();
  const double expected_norm_sum = (0.58 + 0.37 + 0.26) / 1.2;
  const double expected_factor = 3.1346 / 1.44;
  CHECK(std::abs(a.round_norm_sum - expected_norm_sum) <= 1e-9);
  CHECK(std::abs(a.round_factor - expected_factor) <= 1e-9);
  CHECK(a.equality_gap > 0.0);
  CHECK(a.gram_rank == 2);
  CHECK(std::abs(std::exp(ledger.logdet_vt()) - 3.1346) <= 1e-9);
  CHECK(std::abs(std::exp(ledger.running_lower_logdet()) - 2.892) <= 1e-9);
}

TEST_CASE("zero column round leaves the determinant unchanged") {
  MomentLedger ledger(PosDefMatrix::scaled_identity(3, 2.0), 2);
  const RoundAudit a =
      ledger.update_round(RoundContexts(3, {0}, {{0.0, 0.0, 0.0}}));
  CHECK(a.round_factor == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(a.round_norm_sum == 0.0);
  CHECK(std::abs(a.equality_gap) <= 1e-14);
}

TEST_CASE("single rank-1 play gives exact equality") {
  MomentLedger ledger(PosDefMatrix(Matrix::identity(2)), 1);
  const RoundAudit a = ledger.update_round(RoundContexts(2, {0}, {{1.0, 0.0}}));
  CHECK(a.round_factor == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a.round_norm_sum == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a.equality_gap) <= 1e-12);
  CHECK(a.gram_rank == 1);
}

TEST_CASE("update_round rejects bad input") {
  MomentLedger ledger(PosDefMatrix(Matrix::identity(2)), 2);
  CHECK_THROWS_AS(
      ledger.update_round(RoundContexts(3, {0}, {{0.1, 0.0, 0.0}})),
      DimensionMismatch);
  CHECK_THROWS_AS(ledger.update_round(RoundContexts(
                      2, {0, 1, 2}, {{0.1, 0.0}, {0.2, 0.0}, {0.3, 0.0}})),
                  SuperArmTooLarge);
}

TEST_CASE("round_factor_by_expansion") {
  const ExpansionResult a = round_factor_by_expansion({1.0, 2.0});
  CHECK(a.factor == doctest::Approx(6.0));
  CHECK(a.factor_esum == doctest::Approx(6.0));
  CHECK(a.truncated == doctest::Approx(4.0));

  const ExpansionResult b = round_factor_by_expansion({0.0, 0.0, 0.0});
  CHECK(b.factor == doctest::Approx(1.0));
  CHECK(b.truncated == doctest::Approx(1.0));

  CHECK_THROWS_AS(round_factor_by_expansion({-1e-6}), NegativeEigenvalue);
}

TEST_CASE("counterexample Gram eigenvalues via the 3x3 char-poly oracle") {
  // Gram = X^T X / 1.2 for the three counterexample columns.
  const Matrix x = Matrix::from_columns(counterexample_contexts());
  const Matrix gram = (x.transposed() * x).scaled(1.0 / 1.2);
  const std::vector<double> eigs = oracle::sym3_eigs(gram);
  const ExpansionResult r = round_factor_by_expansion(eigs);
  CHECK(std::abs(r.factor - 3.1346 / 1.44) <= 1e-9);
  CHECK(std::abs(r.truncated - (1.0 + 1.21 / 1.2)) <= 1e-9);

  // same eigenvalues as the ledger's Jacobi route
  MomentLedger ledger = counterexample_ledger();
  const auto& jac = ledger.audits().front().gram_eigs;
  REQUIRE(jac.size() == 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(jac[i] - eigs[i]) <= 1e-10);
}

TEST_CASE("claim1_violated") {
  MomentLedger empty(PosDefMatrix(Matrix::identity(2)), 1);
  CHECK_THROWS_AS(empty.claim1_violated(), EmptyLedger);

  const MomentLedger cx = counterexample_ledger();
  const Claim1Report r = cx.claim1_violated();
  CHECK(r.violated);
  CHECK(std::exp(r.lhs_logdet) == doctest::Approx(3.1346).epsilon(1e-10));
  CHECK(std::exp(r.rhs_logdet) == doctest::Approx(2.892).epsilon(1e-10));

  // single-play rounds keep the equality
  CounterRng rng(21, 0);
  MomentLedger sp(PosDefMatrix(Matrix::identity(3)), 1);
  for (int t = 0; t < 20; ++t) sp.update_round(random_round(rng, 3, 1));
  CHECK_FALSE(sp.claim1_violated().violated);

  // co-linear rounds keep the equality
  MomentLedger col(PosDefMatrix::scaled_identity(3, 3.0), 3);
  for (int t = 0; t < 20; ++t)
    col.update_round(random_round(rng, 3, 3, /*colinear=*/true));
  CHECK_FALSE(col.claim1_violated().violated);
}

TEST_CASE("equality_certificate") {
  // x_i = a_i u with u = e_1, a = (1, 2), V = I_2
  const PosDefMatrix vinv(Matrix::identity(2));
  const RoundContexts x(2, {0, 1}, {{1.0, 0.0}, {2.0, 0.0}}, 10.0);
  const EqualityCertificate c = equality_certificate(x, vinv);
  CHECK(c.colinear);
  CHECK(c.gram_rank == 1);
  CHECK(c.trace_gram == doctest::Approx(5.0));
  CHECK(c.u_norm_sq_vinv * c.coeff_norm_sq == doctest::Approx(5.0).epsilon(1e-9));
  CHECK(c.round_factor == doctest::Approx(6.0).epsilon(1e-9));
  CHECK(c.equality_holds);

  const PosDefMatrix v0inv = sym_inverse(PosDefMatrix::scaled_identity(2, 1.2));
  const EqualityCertificate cx = equality_certificate(
      RoundContexts(2, {0, 1, 2}, counterexample_contexts()), v0inv);
  CHECK_FALSE(cx.colinear);
  CHECK(cx.gram_rank == 2);

  CounterRng rng(22, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const RoundContexts single = random_round(rng, 3, 1);
    const EqualityCertificate cs =
        equality_certificate(single, PosDefMatrix(Matrix::identity(3)));
    CHECK(cs.gram_rank <= 1);
    CHECK(cs.round_factor ==
          doctest::Approx(1.0 + mahalanobis_sq(single.columns[0],
                                               PosDefMatrix(Matrix::identity(3))))
              .epsilon(1e-9));
  }
}

TEST_CASE("sum_bound_check basic cases") {
  MomentLedger a(PosDefMatrix(Matrix::identity(2)), 1);
  a.update_round(RoundContexts(2, {0}, {{1.0, 0.0}}));
  const BoundReport r = a.sum_bound_check();
  CHECK(r.assumptions_met);
  CHECK(r.sum_norms == doctest::Approx(1.0));
  CHECK(r.two_delta_logdet == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(r.holds);
  CHECK(r.per_round_norms_ok);

  MomentLedger empty(PosDefMatrix(Matrix::identity(2)), 1);
  const BoundReport re = empty.sum_bound_check();
  CHECK(re.assumptions_met);
  CHECK(re.sum_norms == 0.0);
  CHECK(re.two_delta_logdet == 0.0);
  CHECK(re.holds);

  // lambda_1(V) < k: assumptions not met, nothing asserted
  MomentLedger weak(PosDefMatrix(Matrix::identity(2)), 2);
  CHECK_FALSE(weak.sum_bound_check().assumptions_met);
}

TEST_CASE("sum bound holds on every prefix, both sides from oracles") {
  CounterRng rng(23, 0);
  MomentLedger ledger(PosDefMatrix::scaled_identity(3, 3.0), 3);
  Matrix accum = Matrix::scaled_identity(3, 3.0);
  double oracle_sum = 0.0;
  const double logdet_v0 = PosDefMatrix(accum).logdet();
  for (int t = 0; t < 50; ++t) {
    const RoundContexts x = random_round(rng, 3, 3);
    // independent route: fresh inverse of the accumulated matrix
    const PosDefMatrix vprev(accum);
    const PosDefMatrix vprev_inv = sym_inverse(vprev);
    for (const Vector& col : x.columns)
      oracle_sum += mahalanobis_sq(col, vprev_inv);
    for (const Vector& col : x.columns) accum.add_outer(col);
    ledger.update_round(x);

    const double oracle_logdet = PosDefMatrix(accum.symmetrized()).logdet();
    CHECK(oracle_sum <= 2.0 * (oracle_logdet - logdet_v0) + 1e-9);
    const BoundReport r = ledger.sum_bound_check();
    CHECK(r.assumptions_met);
    CHECK(r.holds);
    CHECK(r.per_round_norms_ok);
    CHECK(std::abs(r.sum_norms - oracle_sum) <= 1e-8 * std::max(1.0, oracle_sum));
  }
}

TEST_CASE("lemma 1 lower bound on random instances") {
  CounterRng meta(24, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(meta.next_int(0, 4));
    const int k = static_cast<int>(meta.next_int(1, 4));
    const int n = static_cast<int>(meta.next_int(1, 20));
    CounterRng rng(meta.next_u64(), 0);
    MomentLedger ledger(
        PosDefMatrix::scaled_identity(d, static_cast<double>(k)), k);
    for (int t = 0; t < n; ++t) {
      ledger.update_round(random_round(rng, d, k));
      CHECK(ledger.logdet_vt() >= ledger.running_lower_logdet() - 1e-9);
    }
  }
}

TEST_CASE("trace identity: three routes agree") {
  CounterRng rng(25, 0);
  MomentLedger ledger(PosDefMatrix::scaled_identity(4, 2.0), 3);
  for (int t = 0; t < 30; ++t) {
    const RoundContexts x = random_round(rng, 4, 3);
    const Matrix vinv_before = ledger.vt_inv();
    const RoundAudit a = ledger.update_round(x);
    double eig_sum = 0.0;
    for (double ev : a.gram_eigs) eig_sum += ev;
    const Matrix xm = x.as_matrix();
    const Matrix gram = (xm.transposed() * vinv_before * xm).symmetrized();
    double trace = 0.0;
    for (std::size_t i = 0; i < gram.rows(); ++i) trace += gram(i, i);
    CHECK(a.round_norm_sum ==
          doctest::Approx(eig_sum).epsilon(1e-9));
    CHECK(a.round_norm_sum == doctest::Approx(trace).epsilon(1e-9));
    CHECK(a.gram_trace == doctest::Approx(trace).epsilon(1e-12));
  }
}

TEST_CASE("logdet increments match the d x d refactoring route") {
  CounterRng rng(26, 0);
  MomentLedger ledger(PosDefMatrix::scaled_identity(4, 2.0), 3);
  double prev_logdet = ledger.logdet_vt();
  for (int t = 0; t < 40; ++t) {
    const RoundAudit a = ledger.update_round(random_round(rng, 4, 3));
    const double refactored = PosDefMatrix(ledger.vt().symmetrized()).logdet();
    const double incr_small = std::log(a.round_factor);
    const double incr_big = refactored - prev_logdet;
    CHECK(std::abs(incr_small - incr_big) <= 1e-9 * std::max(1.0, incr_big));
    CHECK(ledger.logdet_vt() >= prev_logdet - 1e-12);
    prev_logdet = ledger.logdet_vt();
  }
}

TEST_CASE("sharpness: rank <= 1 rounds never violate claim 1") {
  CounterRng rng(27, 0);
  MomentLedger ledger(PosDefMatrix::scaled_identity(3, 2.0), 2);
  for (int t = 0; t < 25; ++t) {
    const RoundAudit a = ledger.update_round(random_round(rng, 3, 2, true));
    CHECK(a.gram_rank <= 1);
    CHECK(std::abs(a.equality_gap) <= 1e-9 * a.round_factor);
  }
  CHECK_FALSE(ledger.claim1_violated().violated);

  // any rank >= 2 round with nonnegligible dropped terms flips the auditor
  MomentLedger generic(PosDefMatrix::scaled_identity(2, 1.2), 3);
  const RoundAudit a = generic.update_round(counterexample_round());
  const ExpansionResult ex = round_factor_by_expansion(a.gram_eigs);
  CHECK(a.gram_rank >= 2);
  CHECK(ex.factor - ex.truncated > 1e-9);
  CHECK(generic.claim1_violated().violated);
}

TEST_CASE("rebuild_and_verify") {
  MomentLedger fresh(PosDefMatrix(Matrix::identity(4)), 2);
  const DriftReport r0 = fresh.rebuild_and_verify();
  CHECK(r0.frobenius_rel == 0.0);
  CHECK(r0.logdet_rel == 0.0);

  const MomentLedger cx = counterexample_ledger();
  CHECK(cx.rebuild_and_verify().logdet_rel <= 1e-12);

  CounterRng rng(28, 0);
  MomentLedger big(PosDefMatrix::scaled_identity(8, 4.0), 4);
  for (int t = 0; t < 1000; ++t) big.update_round(random_round(rng, 8, 4));
  const DriftReport r = big.rebuild_and_verify();
  CHECK(r.frobenius_rel <= 1e-8);
  CHECK(r.inverse_frobenius_rel <= 1e-8);
  CHECK(r.logdet_rel <= 1e-8);
}

TEST_CASE("audit CSV schema and golden first row") {
  const MomentLedger cx = counterexample_ledger();
  std::ostringstream os;
  write_audit_csv(cx, os);
  const std::string out = os.str();
  CHECK(out.rfind("t,round_norm_sum,round_factor,gram_rank,equality_gap,"
                  "logdet_Vt,running_lower_logdet,sum_norms,two_delta_logdet\n",
                  0) == 0);
  CHECK(out.find("\n1,1.00833333,2.17680556,2,") != std::string::npos);
}
