#pragma once

// Optimistic linear semi-bandit policy on top of the moment ledger:
// ridge point estimate theta_hat = V_t^-1 b_t, per-arm score
// theta_hat . x + alpha * ||x||_{V_t^-1}, top-k super-arm selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "c2ucb/errors.hpp"
#include "c2ucb/ledger.hpp"
#include "c2ucb/linalg.hpp"
#include "c2ucb/matrix.hpp"

namespace c2ucb {

struct RoundLog {
  int t = 0;
  std::vector<int> chosen;
  std::vector<double> scores;
  double realized_reward = 0.0;
  double instant_regret = 0.0;
  RoundAudit audit;
};

// Top-k indices by score, ties broken toward the smaller index; output
// sorted ascending.
inline std::vector<int> select_super_arm(const std::vector<double>& scores,
                                         int k) {
  const int m = static_cast<int>(scores.size());
  if (k < 1 || k > m) throw BadK("need 1 <= k <= m");
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&scores](int a, int b) { return scores[a] > scores[b]; });
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

// Expected-reward shortfall of `chosen` against the best size-k super arm
// under theta_star. Top-k by mean is the exact maximizer of the sum.
inline double instant_regret(const Vector& theta_star,
                             const std::vector<Vector>& contexts,
                             const std::vector<int>& chosen, int k) {
  if (static_cast<int>(chosen.size()) != k)
    throw BadK("chosen size must equal k");
  std::vector<double> means(contexts.size());
  for (std::size_t i = 0; i < contexts.size(); ++i)
    means[i] = dot(theta_star, contexts[i]);
  const std::vector<int> best = select_super_arm(means, k);
  double best_sum = 0.0, chosen_sum = 0.0;
  for (int i : best) best_sum += means[i];
  for (int i : chosen) chosen_sum += means[static_cast<std::size_t>(i)];
  return best_sum - chosen_sum;
}

class PolicyState {
 public:
  PolicyState(PosDefMatrix v0, int k_cap, double alpha = 1.0,
              double max_context_norm = 1.0)
      : ledger_(std::move(v0), k_cap, max_context_norm),
        b_(ledger_.dim(), 0.0),
        theta_hat_(ledger_.dim(), 0.0),
        alpha_(alpha) {
    if (alpha_ < 0.0) throw ConfigError("alpha must be nonnegative");
  }

  const MomentLedger& ledger() const { return ledger_; }
  const Vector& b() const { return b_; }
  const Vector& theta_hat() const { return theta_hat_; }
  double alpha() const { return alpha_; }
  int k_cap() const { return ledger_.k_cap(); }

  std::vector<double> ucb_scores(const std::vector<Vector>& contexts) const {
    std::vector<double> scores;
    scores.reserve(contexts.size());
    const Matrix& vinv = ledger_.vt_inv();
    for (const Vector& x : contexts) {
      if (x.size() != ledger_.dim())
        throw DimensionMismatch("context dimension in ucb_scores");
      const double width = std::sqrt(std::max(0.0, dot(x, vinv * x)));
      scores.push_back(dot(theta_hat_, x) + alpha_ * width);
    }
    return scores;
  }

  RoundAudit observe(const RoundContexts& x, const std::vector<double>& rewards) {
    if (rewards.size() != x.size())
      throw DimensionMismatch("one reward per played arm");
    RoundAudit audit = ledger_.update_round(x);
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.dim; ++j)
        b_[j] += x.columns[i][j] * rewards[i];
    theta_hat_ = ledger_.vt_inv() * b_;
    return audit;
  }

 private:
  MomentLedger ledger_;
  Vector b_;
  Vector theta_hat_;
  double alpha_;
};

}  // namespace c2ucb
