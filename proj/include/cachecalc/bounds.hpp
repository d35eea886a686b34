#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cachecalc/rational.hpp"

namespace cachecalc::bounds {

struct PreconditionViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The experiment universe: K active users, N files, memory ratio gamma.
struct SystemConfig {
  int K;
  int N;
  Rational gamma;

  SystemConfig(int K_, int N_, Rational gamma_);
  int r() const { return K < N ? K : N; }
};

/// Generic normalized ranks of intersections/unions of s random cache
/// subspaces, and the fraction of a file seen by exactly a given user set.
///   tau_s  = [1 - s(1-gamma)]^+      (intersection)
///   rho_s  = min(s*gamma, 1)         (union)
///   beta_s = gamma^s (1-gamma)^(K-s) (exact-coverage fraction)
struct RankProfile {
  std::vector<Rational> tau;   // index s in [0:K]
  std::vector<Rational> rho;
  std::vector<Rational> beta;
};

struct TradeoffCurve {
  std::string scheme_name;
  std::vector<std::pair<Rational, Rational>> points;  // (gamma, load)
};

Rational tau(const SystemConfig& cfg, int s);
Rational rho(const SystemConfig& cfg, int s);
Rational beta(const SystemConfig& cfg, int s);
RankProfile rank_profile(const SystemConfig& cfg);

/// Multicast message count per level: c(t) = binom(K,t+1) - binom(K-r,t+1).
Integer delivery_coefficient(const SystemConfig& cfg, int t);

/// Genie-aided lower bound: sum_{t=1}^{r} [1 - t*gamma]^+.
Rational converse_delta1(const SystemConfig& cfg);

/// Submodularity-based lower bound; requires K >= 3 and N >= 2.
Rational converse_delta2(const SystemConfig& cfg);

/// max of delta1 and (where defined) delta2.
Rational best_converse(const SystemConfig& cfg);

/// Closed-form optimal load of the linear-placement scheme on the known
/// ranges and isolated points; absent outside them (no interpolation: the
/// tradeoff is not convex and memory sharing is unavailable here).
std::optional<Rational> table1_load(const SystemConfig& cfg);

/// Exact expected worst-case load of decentralized uncoded placement.
Rational uncoded_load(const SystemConfig& cfg);

/// Corner points of the centralized uncoded-placement scheme with the lower
/// convex envelope applied; loads use |L| = min(K, N) worst-case demands.
TradeoffCurve yma_curve(const SystemConfig& cfg);

/// Envelope evaluated at an arbitrary gamma (piecewise-linear, exact).
Rational yma_envelope_value(const SystemConfig& cfg, const Rational& gamma);

struct MdsResult {
  double theta_star;  // precoding rate minimizing the load
  double load;
};

/// Load of MDS-precoded decentralized uncoded placement, minimized over the
/// precoding rate theta on a dense grid with local refinement.
MdsResult mds_load(const SystemConfig& cfg);

}  // namespace cachecalc::bounds
