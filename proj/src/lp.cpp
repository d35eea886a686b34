#include "cachecalc/lp.hpp"

#include <algorithm>

namespace cachecalc::lp {

namespace {

enum class Rel { LE, GE };

struct Row {
  std::vector<Rational> a;
  Rel rel;
  Rational b;
};

// Textbook two-phase tableau simplex, min c.x, x >= 0, exact rationals.
// Bland's rule (lowest eligible index enters, lowest basic index breaks
// ratio ties) guarantees termination.
class Simplex {
 public:
  Simplex(std::vector<Rational> cost, std::vector<Row> rows)
      : n_(cost.size()), m_(rows.size()), cost_(std::move(cost)) {
    for (auto& r : rows)
      if (r.b < 0) {
        for (auto& v : r.a) v = -v;
        r.b = -r.b;
        r.rel = r.rel == Rel::LE ? Rel::GE : Rel::LE;
      }
    cols_ = n_ + m_;  // one slack/surplus per row
    std::size_t artificial_count = 0;
    for (const auto& r : rows)
      if (r.rel == Rel::GE) ++artificial_count;
    first_artificial_ = cols_;
    cols_ += artificial_count;

    tab_.assign(m_, std::vector<Rational>(cols_ + 1, Rational(0)));
    basis_.assign(m_, 0);
    std::size_t art = first_artificial_;
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) tab_[i][j] = rows[i].a[j];
      tab_[i][cols_] = rows[i].b;
      if (rows[i].rel == Rel::LE) {
        tab_[i][n_ + i] = 1;
        basis_[i] = n_ + i;
      } else {
        tab_[i][n_ + i] = -1;
        tab_[i][art] = 1;
        basis_[i] = art++;
      }
    }
  }

  // returns false when the phase-1 optimum is nonzero (infeasible)
  bool run() {
    if (first_artificial_ < cols_) {
      std::vector<Rational> phase1(cols_, Rational(0));
      for (std::size_t j = first_artificial_; j < cols_; ++j) phase1[j] = 1;
      optimize(phase1, cols_);
      Rational p1 = 0;
      for (std::size_t i = 0; i < m_; ++i)
        if (basis_[i] >= first_artificial_) p1 += tab_[i][cols_];
      if (p1 != 0) return false;
      evict_artificials();
    }
    std::vector<Rational> phase2(cols_, Rational(0));
    for (std::size_t j = 0; j < n_; ++j) phase2[j] = cost_[j];
    optimize(phase2, first_artificial_);
    return true;
  }

  Rational value(std::size_t j) const {
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] == j) return tab_[i][cols_];
    return Rational(0);
  }

 private:
  void optimize(const std::vector<Rational>& c, std::size_t allowed_cols) {
    for (;;) {
      std::size_t enter = cols_;
      for (std::size_t j = 0; j < allowed_cols; ++j) {
        if (reduced_cost(c, j) < 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return;
      std::size_t leave = m_;
      Rational best_ratio;
      for (std::size_t i = 0; i < m_; ++i) {
        if (tab_[i][enter] <= 0) continue;
        Rational ratio = tab_[i][cols_] / tab_[i][enter];
        if (leave == m_ || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == m_)
        throw Infeasible("achievability program unbounded; solver invariant broken");
      pivot(leave, enter);
    }
  }

  Rational reduced_cost(const std::vector<Rational>& c, std::size_t j) const {
    Rational rc = c[j];
    for (std::size_t i = 0; i < m_; ++i)
      if (c[basis_[i]] != 0) rc -= c[basis_[i]] * tab_[i][j];
    return rc;
  }

  // After phase 1 an artificial may linger in the basis at level zero;
  // pivot it out on any usable column so phase 2 never touches it.
  void evict_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < first_artificial_) continue;
      for (std::size_t j = 0; j < first_artificial_; ++j) {
        if (tab_[i][j] != 0) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  void pivot(std::size_t leave, std::size_t enter) {
    auto& prow = tab_[leave];
    const Rational inv = 1 / prow[enter];
    for (auto& v : prow) v *= inv;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == leave || tab_[i][enter] == 0) continue;
      const Rational f = tab_[i][enter];
      for (std::size_t j = 0; j <= cols_; ++j) tab_[i][j] -= f * prow[j];
    }
    basis_[leave] = enter;
  }

  std::size_t n_, m_, cols_ = 0, first_artificial_ = 0;
  std::vector<Rational> cost_;
  std::vector<std::vector<Rational>> tab_;
  std::vector<std::size_t> basis_;
};

}  // namespace

Solution solve(const bounds::SystemConfig& cfg) {
  const int K = cfg.K;
  const std::size_t nv = 2 * (K + 1);  // lambda_0..K then eta_0..K
  auto lam = [&](int s) { return static_cast<std::size_t>(s); };
  auto eta = [&](int s) { return static_cast<std::size_t>(K + 1 + s); };

  std::vector<Rational> cost(nv, Rational(0));
  for (int j = 0; j <= K - 1; ++j)
    cost[eta(j)] = Rational(bounds::delivery_coefficient(cfg, j));

  std::vector<Row> rows;
  for (int s = 0; s <= K; ++s) {
    Row r{std::vector<Rational>(nv, Rational(0)), Rel::LE, bounds::tau(cfg, s)};
    for (int j = s; j <= K; ++j) r.a[lam(j)] = Rational(binom(K - s, j - s));
    rows.push_back(std::move(r));
  }
  // decoding-correctness equality, kept as a <= / >= pair
  {
    Row r{std::vector<Rational>(nv, Rational(0)), Rel::LE, 1 - cfg.gamma};
    for (int j = 0; j <= K - 1; ++j) r.a[eta(j)] = Rational(binom(K - 1, j));
    rows.push_back(r);
    r.rel = Rel::GE;
    rows.push_back(std::move(r));
  }
  for (int s = 0; s <= K; ++s) {
    Row r{std::vector<Rational>(nv, Rational(0)), Rel::LE, Rational(0)};
    r.a[eta(s)] = 1;
    r.a[lam(s)] = -1;
    rows.push_back(std::move(r));
  }

  Simplex sx(cost, std::move(rows));
  if (!sx.run())
    throw Infeasible("achievability program infeasible; solver invariant broken");

  Solution sol;
  sol.lambda.resize(K + 1);
  sol.eta.resize(K + 1);
  sol.objective = 0;
  for (int s = 0; s <= K; ++s) {
    sol.lambda[s] = sx.value(lam(s));
    sol.eta[s] = sx.value(eta(s));
  }
  for (int j = 0; j <= K - 1; ++j)
    sol.objective += sol.eta[j] * Rational(bounds::delivery_coefficient(cfg, j));
  return sol;
}

std::optional<Solution> feasible_solution_table1(const bounds::SystemConfig& cfg) {
  if (cfg.K < 2 || cfg.N < 2) return std::nullopt;
  const int K = cfg.K;
  const Rational& g = cfg.gamma;
  Solution sol;
  sol.lambda.assign(K + 1, Rational(0));
  sol.eta.assign(K + 1, Rational(0));

  if (g <= Rational(1, K)) {
    sol.lambda[1] = sol.eta[1] = g;
    sol.lambda[0] = sol.eta[0] = 1 - K * g;
  } else if (g <= Rational(1, 2)) {
    sol.lambda[1] = Rational(1, K);
    sol.eta[1] = (1 - g) / (K - 1);
  } else if (g >= Rational(K - 2, K - 1) && g <= Rational(K - 1, K)) {
    sol.lambda[K - 1] = sol.eta[K - 1] = bounds::tau(cfg, K - 1);
    sol.lambda[K - 2] = (1 - K * sol.lambda[K - 1]) / Rational(binom(K, 2));
    sol.eta[K - 2] = (1 - g - sol.eta[K - 1]) / (K - 1);
  } else if (g >= Rational(K - 1, K)) {
    sol.lambda[K] = sol.eta[K] = bounds::tau(cfg, K);
    sol.lambda[K - 1] = sol.eta[K - 1] = 1 - g;
  } else {
    bool matched = false;
    for (int t = 1; t <= K - 1; ++t) {
      if (g == Rational(t, t + 1)) {
        sol.lambda[t] = Rational(1) / Rational(binom(K, t));
        sol.eta[t] = Rational(1) / Rational((t + 1) * binom(K - 1, t));
        matched = true;
        break;
      }
    }
    if (!matched) return std::nullopt;
  }
  sol.objective = 0;
  for (int j = 0; j <= K - 1; ++j)
    sol.objective += sol.eta[j] * Rational(bounds::delivery_coefficient(cfg, j));
  return sol;
}

bool satisfies_constraints(const bounds::SystemConfig& cfg, const Solution& sol) {
  const int K = cfg.K;
  if (sol.lambda.size() != static_cast<std::size_t>(K + 1) ||
      sol.eta.size() != static_cast<std::size_t>(K + 1))
    return false;
  for (int s = 0; s <= K; ++s) {
    if (sol.eta[s] < 0 || sol.eta[s] > sol.lambda[s]) return false;
    Rational lhs = 0;
    for (int j = s; j <= K; ++j)
      lhs += Rational(binom(K - s, j - s)) * sol.lambda[j];
    if (lhs > bounds::tau(cfg, s)) return false;
  }
  Rational decode = 0;
  for (int j = 0; j <= K - 1; ++j)
    decode += Rational(binom(K - 1, j)) * sol.eta[j];
  if (decode != 1 - cfg.gamma) return false;
  Rational obj = 0;
  for (int j = 0; j <= K - 1; ++j)
    obj += sol.eta[j] * Rational(bounds::delivery_coefficient(cfg, j));
  return obj == sol.objective;
}

}  // namespace cachecalc::lp
