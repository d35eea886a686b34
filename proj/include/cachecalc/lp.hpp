#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cachecalc/bounds.hpp"
#include "cachecalc/rational.hpp"

namespace cachecalc::lp {

/// The achievability program is feasible for every gamma in [0, 1]; seeing
/// this thrown means the solver itself is broken, not the input.
struct Infeasible : std::logic_error {
  using std::logic_error::logic_error;
};

/// Optimal (lambda, eta) split: lambda_s is the normalized dimension of the
/// coded subfile seen by exactly an s-subset of users, eta_s the portion of
/// it actually transmitted.
struct Solution {
  std::vector<Rational> lambda;  // index s in [0:K]
  std::vector<Rational> eta;     // index s in [0:K]
  Rational objective;
};

/// Exact solve of the achievability linear program:
///   min  sum_{j=0}^{K-1} eta_j c(j)
///   s.t. sum_{j=s}^{K} binom(K-s, j-s) lambda_j <= tau_s   for s in [0:K]
///        sum_{j=0}^{K-1} binom(K-1, j) eta_j = 1 - gamma
///        0 <= eta_s <= lambda_s                            for s in [0:K]
/// Primal simplex with Bland's rule, all pivots in rationals; deterministic.
Solution solve(const bounds::SystemConfig& cfg);

/// The closed-form feasible assignment for gamma inside a covered range or
/// at a covered corner point; absent elsewhere.
std::optional<Solution> feasible_solution_table1(const bounds::SystemConfig& cfg);

/// Checks every program constraint and the objective identity; used by the
/// simulator precondition and by tests.
bool satisfies_constraints(const bounds::SystemConfig& cfg, const Solution& sol);

}  // namespace cachecalc::lp
