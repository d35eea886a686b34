#include "cachecalc/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cachecalc::bounds {


SystemConfig::SystemConfig(int K_, int N_, Rational gamma_)
    : K(K_), N(N_), gamma(std::move(gamma_)) {
  gamma.canonicalize();
  if (K < 1 || N < 1) throw PreconditionViolation("K and N must be >= 1");
  if (gamma < 0 || gamma > 1)
    throw PreconditionViolation("memory ratio must lie in [0, 1]");
}

Rational tau(const SystemConfig& cfg, int s) {
  Rational t = 1 - s * (1 - cfg.gamma);
  return t > 0 ? t : Rational(0);
}

Rational rho(const SystemConfig& cfg, int s) {
  Rational u = s * cfg.gamma;
  return u < 1 ? u : Rational(1);
}

Rational beta(const SystemConfig& cfg, int s) {
  Rational b = 1;
  for (int i = 0; i < s; ++i) b *= cfg.gamma;
  for (int i = 0; i < cfg.K - s; ++i) b *= 1 - cfg.gamma;
  return b;
}

RankProfile rank_profile(const SystemConfig& cfg) {
  RankProfile p;
  p.tau.reserve(cfg.K + 1);
  p.rho.reserve(cfg.K + 1);
  p.beta.reserve(cfg.K + 1);
  for (int s = 0; s <= cfg.K; ++s) {
    p.tau.push_back(tau(cfg, s));
    p.rho.push_back(rho(cfg, s));
    p.beta.push_back(beta(cfg, s));
  }
  return p;
}

Integer delivery_coefficient(const SystemConfig& cfg, int t) {
  return binom(cfg.K, t + 1) - binom(cfg.K - cfg.r(), t + 1);
}

Rational converse_delta1(const SystemConfig& cfg) {
  Rational sum = 0;
  for (int t = 1; t <= cfg.r(); ++t) {
    Rational term = 1 - t * cfg.gamma;
    if (term > 0) sum += term;
  }
  return sum;
}

Rational converse_delta2(const SystemConfig& cfg) {
  if (cfg.K < 3 || cfg.N < 2)
    throw PreconditionViolation("converse_delta2 requires K >= 3 and N >= 2");
  const int r = cfg.r();
  Rational v = r * (1 - cfg.gamma);
  v -= (tau(cfg, cfg.K - 1) - tau(cfg, cfg.K)) / (cfg.K - 1);
  for (int j = 3; j <= r; ++j) v -= rho(cfg, j) - cfg.gamma;
  for (int j = 3; j <= cfg.K; ++j) {
    Rational a = cfg.gamma + tau(cfg, j - 2);
    Rational b = 1 - cfg.gamma;
    v -= (a < b ? a : b) / (cfg.K - 1);
  }
  return v;
}

Rational best_converse(const SystemConfig& cfg) {
  Rational d = converse_delta1(cfg);
  if (cfg.K >= 3 && cfg.N >= 2) d = std::max(d, converse_delta2(cfg));
  return d;
}

std::optional<Rational> table1_load(const SystemConfig& cfg) {
  if (cfg.K < 2 || cfg.N < 2) return std::nullopt;
  const int K = cfg.K;
  const int r = cfg.r();
  const Rational& g = cfg.gamma;
  if (g <= Rational(1, K)) return r - g * r * (r + 1) / 2;
  if (g <= Rational(1, 2))
    return (1 - g) * r * (2 * K - r - 1) / (2 * K - 2);
  for (int t = 1; t <= K - 3; ++t)
    if (g == Rational(t, t + 1))
      return ratio(delivery_coefficient(cfg, t), (t + 1) * binom(K - 1, t));
  if (g >= Rational(K - 2, K - 1) && g <= Rational(K - 1, K))
    return 2 - g * (2 * K - 1) / (K - 1);
  if (g >= Rational(K - 1, K)) return 1 - g;
  return std::nullopt;
}

Rational uncoded_load(const SystemConfig& cfg) {
  if (cfg.gamma == 0) return Rational(cfg.r());
  Rational miss = 1;
  for (int i = 0; i < cfg.r(); ++i) miss *= 1 - cfg.gamma;
  return (1 - cfg.gamma) / cfg.gamma * (1 - miss);
}

TradeoffCurve yma_curve(const SystemConfig& cfg) {
  std::vector<std::pair<Rational, Rational>> pts;
  for (int t = 0; t <= cfg.K; ++t)
    pts.emplace_back(ratio(t, cfg.K),
                     ratio(delivery_coefficient(cfg, t), binom(cfg.K, t)));
  // lower convex envelope (monotone chain over x-sorted points)
  std::vector<std::pair<Rational, Rational>> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // drop b when it is on or above chord a--p
      if ((b.second - a.second) * (p.first - a.first) >=
          (p.second - a.second) * (b.first - a.first))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }
  return TradeoffCurve{"yma", std::move(hull)};
}

Rational yma_envelope_value(const SystemConfig& cfg, const Rational& gamma) {
  const auto curve = yma_curve(cfg);
  const auto& h = curve.points;
  for (size_t i = 0; i + 1 < h.size(); ++i) {
    if (gamma >= h[i].first && gamma <= h[i + 1].first) {
      if (h[i + 1].first == h[i].first) return h[i].second;
      return h[i].second + (h[i + 1].second - h[i].second) *
                               (gamma - h[i].first) /
                               (h[i + 1].first - h[i].first);
    }
  }
  throw PreconditionViolation("gamma outside [0, 1] for envelope evaluation");
}

namespace {

// One evaluation of the precoded-delivery system at rate theta: locate the
// partial level s' by descending cumulative sum, solve for the fraction
// eta', and price the transmitted messages.
std::optional<double> mds_load_at(const SystemConfig& cfg, double gamma,
                                  double theta) {
  const int K = cfg.K;
  const double gp = gamma * theta;  // caching probability per coded symbol
  if (theta <= 0.0 || theta > 1.0 || gp >= 1.0) return std::nullopt;
  std::vector<double> bp(K + 1), cw(K + 1), choose(K + 1, 0.0);
  for (int s = 0; s <= K; ++s) {
    bp[s] = std::pow(gp, s) * std::pow(1.0 - gp, K - s) / theta;
    cw[s] = mpz_get_d(delivery_coefficient(cfg, s).get_mpz_t());
    if (s <= K - 1) choose[s] = mpz_get_d(binom(K - 1, s).get_mpz_t());
  }
  std::vector<double> tail(K + 2, 0.0);
  for (int s = K; s >= 0; --s) tail[s] = tail[s + 1] + choose[s] * bp[s];
  const double need = 1.0 - gamma;
  for (int sp = K - 1; sp >= 0; --sp) {
    const double cap = choose[sp] * bp[sp];
    if (cap <= 0.0) continue;
    if (tail[sp + 1] < need && need <= tail[sp + 1] + cap * (1.0 + 1e-12)) {
      const double eta = (need - tail[sp + 1]) / cap;
      double load = eta * cw[sp] * bp[sp];
      for (int s = sp + 1; s <= K; ++s) load += cw[s] * bp[s];
      return load;
    }
  }
  return std::nullopt;  // no (s', eta') balances the budget at this theta
}

}  // namespace

MdsResult mds_load(const SystemConfig& cfg) {
  const double gamma = cfg.gamma.get_d();
  if (cfg.gamma == 1) return {1.0, 0.0};

  constexpr int kGridPoints = 10000;
  double best_theta = 0.0, best_load = 0.0;
  bool found = false;
  for (int i = 1; i <= kGridPoints; ++i) {
    const double theta = static_cast<double>(i) / kGridPoints;
    auto load = mds_load_at(cfg, gamma, theta);
    if (load && (!found || *load < best_load)) {
      found = true;
      best_load = *load;
      best_theta = theta;
    }
  }
  if (!found) throw PreconditionViolation("no feasible precoding rate found");

  // Local refinement around the best grid cell. The objective is piecewise
  // smooth and locally unimodal around the grid minimum; golden-section is
  // robust against the kinks at level breakpoints.
  const double step = 1.0 / kGridPoints;
  double lo = std::max(1e-12, best_theta - step);
  double hi = std::min(1.0, best_theta + step);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  auto eval = [&](double th) {
    auto v = mds_load_at(cfg, gamma, th);
    return v ? *v : std::numeric_limits<double>::infinity();
  };
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < 220; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eval(x2);
    }
  }
  const double theta_ref = (f1 < f2) ? x1 : x2;
  const double load_ref = std::min(f1, f2);
  if (load_ref < best_load) {
    best_load = load_ref;
    best_theta = theta_ref;
  }
  return {best_theta, best_load};
}

}  // namespace cachecalc::bounds
