#include "cachecalc/sim.hpp"

#include <algorithm>
#include <bit>
#include <limits>

namespace cachecalc::sim {

using linalg::EchelonBasis;
using linalg::Matrix;
using linalg::Subspace;

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// stream labels
constexpr std::uint64_t kStreamPlacement = 1;
constexpr std::uint64_t kStreamDecompose = 2;
constexpr std::uint64_t kStreamDemand = 3;
constexpr std::uint64_t kStreamProfile = 4;

std::uint64_t mix64(std::uint64_t x) {
  x += kGolden;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::size_t rational_times(const Rational& q, std::size_t B) {
  Rational scaled = q * static_cast<unsigned long>(B);
  if (scaled.get_den() != 1)
    throw std::invalid_argument("block size does not clear the denominators");
  return static_cast<std::size_t>(scaled.get_num().get_ui());
}

Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m.set(i, j, rng.field_element());
  return m;
}

// Column space of E (B x c) as a row subspace of F^B.
Subspace column_space(const Matrix& e) {
  return Subspace::span_of_rows(e.transpose());
}

int popcount(std::uint32_t m) { return std::popcount(m); }

// (-1)^(position of user k among the set bits of `subset`)
gf::Fe alternating_sign(std::uint32_t subset, int k) {
  const std::uint32_t below = subset & ((1u << k) - 1u);
  return popcount(below) % 2 == 0 ? gf::Fe(1) : gf::Fe(1).neg();
}

}  // namespace

std::uint64_t Rng::next() {
  s_ += kGolden;
  std::uint64_t x = s_;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() / bound * bound;
  for (;;) {
    const std::uint64_t v = next();
    if (v < limit) return v % bound;
  }
}

gf::Fe Rng::field_element() { return gf::Fe::from_raw(below(gf::prime())); }

Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = mix64(seed);
  for (std::uint64_t label : path) s = mix64(s ^ mix64(label));
  return Rng(s);
}

std::size_t choose_block_size(const bounds::SystemConfig& cfg,
                              const lp::Solution& sol, std::size_t B_min) {
  std::vector<Rational> values{cfg.gamma};
  values.insert(values.end(), sol.lambda.begin(), sol.lambda.end());
  values.insert(values.end(), sol.eta.begin(), sol.eta.end());
  const Integer unit = lcm_denominators(values);
  const auto u = unit.get_ui();
  if (B_min == 0) B_min = 1;
  return u * ((B_min + u - 1) / u);
}

CachePlacement place(const bounds::SystemConfig& cfg, std::size_t B,
                     std::uint64_t seed) {
  const std::size_t cols = rational_times(cfg.gamma, B);
  CachePlacement pl{cfg, B, seed, {}};
  pl.E.resize(cfg.K);
  for (int k = 0; k < cfg.K; ++k) {
    pl.E[k].reserve(cfg.N);
    for (int n = 0; n < cfg.N; ++n) {
      Rng rng = derive_rng(seed, {kStreamPlacement, static_cast<std::uint64_t>(k),
                                  static_cast<std::uint64_t>(n)});
      Matrix e;
      bool full_rank = false;
      for (int attempt = 0; attempt < 16 && !full_rank; ++attempt) {
        e = random_matrix(rng, B, cols);
        full_rank = linalg::rank(e) == cols;
      }
      if (!full_rank)
        throw NonGenericPlacement("cache matrix persistently column-deficient");
      pl.E[k].push_back(std::move(e));
    }
  }
  return pl;
}

SubspaceDecomposition decompose(const CachePlacement& pl, const lp::Solution& sol) {
  const auto& cfg = pl.cfg;
  if (!lp::satisfies_constraints(cfg, sol))
    throw std::invalid_argument("solution violates the achievability program");
  const int K = cfg.K;
  const std::size_t B = pl.B;
  std::vector<std::size_t> block_rows(K + 1);
  for (int s = 0; s <= K; ++s) block_rows[s] = rational_times(sol.lambda[s], B);

  SubspaceDecomposition dec;
  dec.B = B;
  dec.V.resize(cfg.N);

  for (int n = 0; n < cfg.N; ++n) {
    Rng rng = derive_rng(pl.seed, {kStreamDecompose, static_cast<std::uint64_t>(n)});

    // lazily materialized intersection lattice over user subsets
    std::map<std::uint32_t, Subspace> lattice;
    auto cache_space = [&](std::uint32_t mask, auto&& self) -> const Subspace& {
      auto it = lattice.find(mask);
      if (it != lattice.end()) return it->second;
      Subspace space(B);
      if (popcount(mask) == 1) {
        space = column_space(pl.E[std::countr_zero(mask)][n]);
      } else {
        const std::uint32_t low = mask & (~mask + 1u);
        space = linalg::intersect(self(mask ^ low, self), self(low, self));
      }
      return lattice.emplace(mask, std::move(space)).first->second;
    };

    EchelonBasis chosen(B);
    // descending subset size: deeper intersections claim their rows first
    for (int s = K; s >= 1; --s) {
      const std::size_t want = block_rows[s];
      if (want == 0) continue;
      for (std::uint32_t mask = 1; mask < (1u << K); ++mask) {
        if (popcount(mask) != s) continue;
        const Subspace& sub = cache_space(mask, cache_space);
        if (sub.dim() < want)
          throw NonGenericPlacement("intersection rank below the generic value");
        Matrix picked;
        bool ok = false;
        for (int attempt = 0; attempt < 5 && !ok; ++attempt) {
          // random coordinates inside the intersection keep the choice in
          // generic position relative to every other block
          const Matrix cand = random_matrix(rng, want, sub.dim()) * sub.basis();
          EchelonBasis trial = chosen;
          ok = true;
          for (std::size_t i = 0; i < cand.rows(); ++i)
            if (!trial.insert(cand.row(i))) {
              ok = false;
              break;
            }
          if (ok) {
            chosen = std::move(trial);
            picked = cand;
          }
        }
        if (!ok)
          throw NonGenericPlacement("no independent block inside the intersection");
        dec.V[n].emplace(mask, std::move(picked));
      }
    }
    // leftover block: rows of the ambient space independent of everything
    const std::size_t want0 = block_rows[0];
    Matrix leftover(0, B);
    if (want0 > 0) {
      bool ok = false;
      for (int attempt = 0; attempt < 5 && !ok; ++attempt) {
        const Matrix cand = random_matrix(rng, want0, B);
        EchelonBasis trial = chosen;
        ok = true;
        for (std::size_t i = 0; i < cand.rows(); ++i)
          if (!trial.insert(cand.row(i))) {
            ok = false;
            break;
          }
        if (ok) {
          chosen = std::move(trial);
          leftover = cand;
        }
      }
      if (!ok) throw NonGenericPlacement("no independent leftover block");
    }
    dec.V[n].emplace(0u, std::move(leftover));
  }
  return dec;
}

DemandMatrix canonical_worst_case(const bounds::SystemConfig& cfg) {
  DemandMatrix dm;
  dm.D = Matrix(cfg.K, cfg.N);
  for (int k = 0; k < cfg.K; ++k)
    dm.D.set(k, std::min(k, cfg.N - 1), gf::Fe(1));
  dm.rank = static_cast<std::size_t>(cfg.r());
  for (int k = 0; k < cfg.r(); ++k) dm.leaders.push_back(k);
  return dm;
}

DemandMatrix random_full_rank(const bounds::SystemConfig& cfg, std::uint64_t seed) {
  Rng rng = derive_rng(seed, {kStreamDemand});
  const auto target = static_cast<std::size_t>(cfg.r());
  for (int attempt = 0; attempt < 16; ++attempt) {
    DemandMatrix dm;
    dm.D = random_matrix(rng, cfg.K, cfg.N);
    EchelonBasis acc(cfg.N);
    for (int k = 0; k < cfg.K; ++k)
      if (acc.insert(dm.D.row(k))) dm.leaders.push_back(k);
    dm.rank = acc.rank();
    if (dm.rank == target) return dm;
  }
  throw NonGenericPlacement("random demand matrix persistently rank-deficient");
}

namespace {

Message build_message(const CachePlacement& pl, const SubspaceDecomposition& dec,
                      std::uint32_t subset, std::size_t rows_count,
                      const DemandMatrix& demand) {
  const auto& cfg = pl.cfg;
  const std::size_t B = pl.B;
  Message msg{subset, Matrix(rows_count, cfg.N * B)};
  if (rows_count == 0) return msg;
  const std::uint64_t p = gf::prime();
  for (int k = 0; k < cfg.K; ++k) {
    if (!(subset & (1u << k))) continue;
    const gf::Fe sign = alternating_sign(subset, k);
    const std::uint32_t rest = subset & ~(1u << k);
    for (int n = 0; n < cfg.N; ++n) {
      const gf::Fe coeff = sign * demand.D.at(k, n);
      if (coeff.is_zero()) continue;
      const Matrix& block = dec.V[n].at(rest);
      for (std::size_t i = 0; i < rows_count; ++i) {
        auto src = block.row(i);
        auto dst = msg.rows.row(i);
        const std::size_t off = static_cast<std::size_t>(n) * B;
        for (std::size_t j = 0; j < B; ++j)
          dst[off + j] = gf::add_raw(
              dst[off + j], gf::mul_raw(coeff.value(), src[j], p), p);
      }
    }
  }
  return msg;
}

std::uint32_t leader_mask(const DemandMatrix& demand) {
  std::uint32_t m = 0;
  for (std::size_t k : demand.leaders) m |= 1u << k;
  return m;
}

Matrix stack_message_rows(const std::vector<Message>& messages, std::size_t width) {
  Matrix all(0, width);
  for (const auto& m : messages) all = Matrix::vstack(all, m.rows);
  return all;
}

}  // namespace

std::vector<Message> build_all_messages(const CachePlacement& pl,
                                        const SubspaceDecomposition& dec,
                                        const lp::Solution& sol,
                                        const DemandMatrix& demand) {
  const auto& cfg = pl.cfg;
  std::vector<Message> out;
  for (int s = 1; s <= cfg.K; ++s) {
    const std::size_t rows_count = rational_times(sol.eta[s - 1], pl.B);
    for (std::uint32_t mask = 1; mask < (1u << cfg.K); ++mask) {
      if (popcount(mask) != s) continue;
      out.push_back(build_message(pl, dec, mask, rows_count, demand));
    }
  }
  return out;
}

DeliveryTranscript deliver(const CachePlacement& pl, const SubspaceDecomposition& dec,
                           const lp::Solution& sol, const DemandMatrix& demand) {
  const auto& cfg = pl.cfg;
  const std::uint32_t lmask = leader_mask(demand);
  std::vector<Message> sent, omitted;
  for (int s = 1; s <= cfg.K; ++s) {
    const std::size_t rows_count = rational_times(sol.eta[s - 1], pl.B);
    for (std::uint32_t mask = 1; mask < (1u << cfg.K); ++mask) {
      if (popcount(mask) != s) continue;
      Message m = build_message(pl, dec, mask, rows_count, demand);
      if (mask & lmask)
        sent.push_back(std::move(m));
      else
        omitted.push_back(std::move(m));
    }
  }

  DeliveryTranscript tr;
  bool omit_ok = true;
  {
    // the skipped messages must already live in the span of what is sent
    const Matrix sent_rows = stack_message_rows(sent, cfg.N * pl.B);
    for (const auto& m : omitted)
      if (!linalg::in_rowspan(m.rows, sent_rows)) {
        omit_ok = false;
        break;
      }
  }
  if (!omit_ok) {
    for (auto& m : omitted) sent.push_back(std::move(m));
    std::sort(sent.begin(), sent.end(), [](const Message& a, const Message& b) {
      const int pa = popcount(a.subset), pb = popcount(b.subset);
      return pa != pb ? pa < pb : a.subset < b.subset;
    });
    tr.omission_fallback = true;
  }
  tr.messages = std::move(sent);
  tr.total_symbols = 0;
  for (const auto& m : tr.messages) tr.total_symbols += m.rows.rows();
  tr.load = Rational(static_cast<unsigned long>(tr.total_symbols),
                     static_cast<unsigned long>(pl.B));
  tr.load.canonicalize();
  return tr;
}

std::vector<bool> verify_decoding(const CachePlacement& pl,
                                  const DeliveryTranscript& tr,
                                  const DemandMatrix& demand) {
  const auto& cfg = pl.cfg;
  const std::size_t B = pl.B;
  const std::size_t width = cfg.N * B;
  std::vector<bool> ok(cfg.K, false);
  for (int k = 0; k < cfg.K; ++k) {
    EchelonBasis acc(width);
    std::vector<std::uint64_t> row(width);
    // cached symbols: column c of E_{k,n} as a functional on file n
    for (int n = 0; n < cfg.N; ++n) {
      const Matrix& e = pl.E[k][n];
      for (std::size_t c = 0; c < e.cols(); ++c) {
        std::fill(row.begin(), row.end(), 0);
        for (std::size_t r = 0; r < B; ++r)
          row[static_cast<std::size_t>(n) * B + r] = e.at(r, c).value();
        acc.insert(row);
      }
    }
    for (const auto& m : tr.messages)
      for (std::size_t i = 0; i < m.rows.rows(); ++i) acc.insert(m.rows.row(i));
    // demanded function, coordinate by coordinate
    bool user_ok = true;
    for (std::size_t b = 0; b < B && user_ok; ++b) {
      std::fill(row.begin(), row.end(), 0);
      for (int n = 0; n < cfg.N; ++n)
        row[static_cast<std::size_t>(n) * B + b] = demand.D.at(k, n).value();
      user_ok = acc.contains(row);
    }
    ok[k] = user_ok;
  }
  return ok;
}

bool verify_leader_omission(const DeliveryTranscript& tr, const DemandMatrix& demand,
                            const std::vector<Message>& full_messages) {
  const std::uint32_t lmask = leader_mask(demand);
  if (tr.messages.empty() && full_messages.empty()) return true;
  const std::size_t width =
      tr.messages.empty() ? full_messages.front().rows.cols() : tr.messages.front().rows.cols();
  const Matrix sent_rows = stack_message_rows(tr.messages, width);
  for (const auto& m : full_messages) {
    if (m.subset & lmask) continue;  // was transmitted
    if (!linalg::in_rowspan(m.rows, sent_rows)) return false;
  }
  return true;
}

RankProfileEstimate empirical_rank_profile(const bounds::SystemConfig& cfg,
                                           std::size_t B, int s_max, int trials,
                                           std::uint64_t seed) {
  const std::size_t cols = rational_times(cfg.gamma, B);
  RankProfileEstimate est;
  est.B = B;
  est.trials = trials;
  est.intersection_matches.assign(s_max + 1, 0);
  est.union_matches.assign(s_max + 1, 0);
  est.mean_tau.assign(s_max + 1, 0.0);
  est.mean_rho.assign(s_max + 1, 0.0);
  for (int s = 1; s <= s_max; ++s) {
    const std::size_t tau_rows = rational_times(bounds::tau(cfg, s), B);
    const std::size_t rho_rows = rational_times(bounds::rho(cfg, s), B);
    for (int t = 0; t < trials; ++t) {
      Rng rng = derive_rng(seed, {kStreamProfile, static_cast<std::uint64_t>(s),
                                  static_cast<std::uint64_t>(t)});
      std::vector<Subspace> spaces;
      for (int i = 0; i < s; ++i) {
        Matrix e;
        do {
          e = random_matrix(rng, B, cols);
        } while (linalg::rank(e) != cols);
        spaces.push_back(column_space(e));
      }
      Subspace inter = spaces[0];
      Subspace uni = spaces[0];
      for (int i = 1; i < s; ++i) {
        inter = linalg::intersect(inter, spaces[i]);
        uni = linalg::sum_space(uni, spaces[i]);
      }
      if (inter.dim() == tau_rows) est.intersection_matches[s]++;
      if (uni.dim() == rho_rows) est.union_matches[s]++;
      est.mean_tau[s] += static_cast<double>(inter.dim()) / static_cast<double>(B);
      est.mean_rho[s] += static_cast<double>(uni.dim()) / static_cast<double>(B);
    }
    est.mean_tau[s] /= trials;
    est.mean_rho[s] /= trials;
  }
  return est;
}

TrialResult run_trial(const bounds::SystemConfig& cfg, const lp::Solution& sol,
                      std::size_t B, std::uint64_t seed, DemandMode mode) {
  TrialResult result;
  result.B = B;
  for (int attempt = 0;; ++attempt) {
    try {
      const std::uint64_t eff_seed = seed + static_cast<std::uint64_t>(attempt);
      CachePlacement pl = place(cfg, B, eff_seed);
      SubspaceDecomposition dec = decompose(pl, sol);
      DemandMatrix demand = mode == DemandMode::Canonical
                                ? canonical_worst_case(cfg)
                                : random_full_rank(cfg, eff_seed);
      DeliveryTranscript tr = deliver(pl, dec, sol, demand);
      const auto decode = verify_decoding(pl, tr, demand);
      result.measured_load = tr.load;
      result.all_decoded =
          std::all_of(decode.begin(), decode.end(), [](bool b) { return b; });
      result.placement_retries = attempt;
      result.omission_fallback = tr.omission_fallback;
      return result;
    } catch (const NonGenericPlacement&) {
      if (attempt >= 4) throw;
    }
  }
}

}  // namespace cachecalc::sim
