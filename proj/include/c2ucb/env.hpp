#pragma once

// Synthetic context/reward generators, one per determinant-growth regime:
// generic (strict inequality), intra-round co-linear (equality), single-play
// (equality), and the fixed 2-armed-out counterexample instance.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "c2ucb/errors.hpp"
#include "c2ucb/matrix.hpp"
#include "c2ucb/rng.hpp"

namespace c2ucb {

enum class Regime { generic, colinear, single_play, counterexample };

inline std::string to_string(Regime r) {
  switch (r) {
    case Regime::generic: return "generic";
    case Regime::colinear: return "colinear";
    case Regime::single_play: return "single_play";
    case Regime::counterexample: return "counterexample";
  }
  throw ConfigError("unknown regime");
}

inline Regime regime_from_string(const std::string& s) {
  if (s == "generic") return Regime::generic;
  if (s == "colinear") return Regime::colinear;
  if (s == "single_play") return Regime::single_play;
  if (s == "counterexample") return Regime::counterexample;
  throw ConfigError("unknown regime: " + s);
}

// The fixed instance with V = 1.2 I_2 and three non-co-linear contexts,
// for which the product lower bound is 2.892 while det(V_1) = 3.1346.
inline std::vector<Vector> counterexample_contexts() {
  return {{0.3, 0.7}, {0.6, 0.1}, {0.1, 0.5}};
}

struct EnvConfig {
  int d = 2;
  int m = 5;
  int k = 2;
  int n = 100;
  Regime regime = Regime::generic;
  Vector theta_star;  // defaulted to 0.9 * e_1 when empty
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (d < 1 || m < 1 || k < 1 || n < 1)
      throw ConfigError("d, m, k, n must be positive");
    if (k > m) throw ConfigError("k must be <= m");
    if (regime == Regime::single_play && k != 1)
      throw ConfigError("single_play regime forces k = 1");
    if (regime == Regime::counterexample &&
        (d != 2 || m != 3 || k != 3 || n != 1))
      throw ConfigError("counterexample regime forces d=2, m=3, k=3, n=1");
    if (!theta_star.empty()) {
      if (static_cast<int>(theta_star.size()) != d)
        throw ConfigError("theta_star dimension mismatch");
      if (norm2(theta_star) > 1.0 + 1e-12)
        throw ConfigError("theta_star norm must be <= 1");
    }
  }

  Vector effective_theta_star() const {
    if (!theta_star.empty()) return theta_star;
    Vector t(d, 0.0);
    t[0] = 0.9;
    return t;
  }
};

inline void to_json(nlohmann::json& j, const EnvConfig& c) {
  j = nlohmann::json{{"d", c.d},
                     {"m", c.m},
                     {"k", c.k},
                     {"n", c.n},
                     {"regime", to_string(c.regime)},
                     {"theta_star", c.effective_theta_star()},
                     {"noise_sigma", c.noise_sigma},
                     {"seed", c.seed}};
}

inline void from_json(const nlohmann::json& j, EnvConfig& c) {
  j.at("d").get_to(c.d);
  j.at("m").get_to(c.m);
  j.at("k").get_to(c.k);
  j.at("n").get_to(c.n);
  c.regime = regime_from_string(j.at("regime").get<std::string>());
  if (j.contains("theta_star")) j.at("theta_star").get_to(c.theta_star);
  if (j.contains("noise_sigma")) j.at("noise_sigma").get_to(c.noise_sigma);
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
}

// Context substream for round t is keyed by (seed, t); rounds are
// independent and order-free.
inline std::vector<Vector> gen_contexts(const EnvConfig& cfg, int t) {
  if (t < 1 || t > cfg.n) throw BadRound("round index outside 1..n");
  std::vector<Vector> out;
  out.reserve(cfg.m);
  CounterRng rng(cfg.seed, static_cast<std::uint64_t>(t));
  switch (cfg.regime) {
    case Regime::counterexample:
      return counterexample_contexts();
    case Regime::colinear: {
      const Vector u = rng.unit_sphere(cfg.d);
      for (int i = 0; i < cfg.m; ++i) {
        const double a = rng.next_unit();
        Vector x = u;
        for (double& v : x) v *= a;
        out.push_back(std::move(x));
      }
      return out;
    }
    case Regime::generic:
    case Regime::single_play:
      for (int i = 0; i < cfg.m; ++i) out.push_back(rng.unit_ball(cfg.d));
      return out;
  }
  throw ConfigError("unknown regime");
}

// theta_star . x plus zero-mean Gaussian noise.
inline double gen_reward(const EnvConfig& cfg, const Vector& x,
                         CounterRng& rng) {
  double r = dot(cfg.effective_theta_star(), x);
  if (cfg.noise_sigma > 0.0) r += cfg.noise_sigma * rng.next_gaussian();
  return r;
}

}  // namespace c2ucb
