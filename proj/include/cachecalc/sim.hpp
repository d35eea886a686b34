#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "cachecalc/bounds.hpp"
#include "cachecalc/linalg.hpp"
#include "cachecalc/lp.hpp"

namespace cachecalc::sim {

/// Raised when a random draw lands outside the generic-position event the
/// construction relies on; callers retry with a fresh seed.
struct NonGenericPlacement : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// SplitMix64 stream. Substreams are derived from (seed, label path) so each
/// (user, file) pair and each pipeline stage draws independently and
/// reproducibly; trials never share state.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : s_(state) {}
  std::uint64_t next();
  std::uint64_t below(std::uint64_t bound);
  gf::Fe field_element();

 private:
  std::uint64_t s_;
};

Rng derive_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

/// Per-(user, file) random projection matrices E_{k,n} of shape B x gamma*B,
/// entries i.i.d. uniform, full column rank (re-drawn otherwise).
struct CachePlacement {
  bounds::SystemConfig cfg;
  std::size_t B;
  std::uint64_t seed;
  std::vector<std::vector<linalg::Matrix>> E;  // [user][file]

  std::size_t cache_cols() const { return E.empty() || E[0].empty() ? 0 : E[0][0].cols(); }
};

/// Smallest multiple of lcm(denominators of gamma and of every lambda_s,
/// eta_s) that is >= B_min, so every block row count below is an integer.
std::size_t choose_block_size(const bounds::SystemConfig& cfg,
                              const lp::Solution& sol, std::size_t B_min);

CachePlacement place(const bounds::SystemConfig& cfg, std::size_t B,
                     std::uint64_t seed);

/// Per file n, the basis blocks V[n][mask]: lambda_{|mask|}*B rows lying in
/// the intersection of the caches of the users in `mask` and jointly
/// independent of every other chosen block. mask 0 is the leftover block.
struct SubspaceDecomposition {
  std::size_t B = 0;
  std::vector<std::map<std::uint32_t, linalg::Matrix>> V;
};

SubspaceDecomposition decompose(const CachePlacement& pl, const lp::Solution& sol);

struct DemandMatrix {
  linalg::Matrix D;  // K x N
  std::vector<std::size_t> leaders;
  std::size_t rank = 0;
};

/// d_k = e_{min(k, N)}: the demand pattern that forces rank(D) = min(K, N)
/// and pins the worst case.
DemandMatrix canonical_worst_case(const bounds::SystemConfig& cfg);

/// Uniform random D, re-drawn until rank(D) = min(K, N).
DemandMatrix random_full_rank(const bounds::SystemConfig& cfg, std::uint64_t seed);

/// One multicast message: eta_{|S|-1}*B rows over F_p^{N*B}, the signed sum
/// of the demand-weighted truncated blocks of the users in `subset`.
struct Message {
  std::uint32_t subset;
  linalg::Matrix rows;
};

struct DeliveryTranscript {
  std::vector<Message> messages;  // transmitted messages only
  std::size_t total_symbols = 0;
  Rational load;
  /// True when the alternating-sign reconstruction check failed and the
  /// server fell back to transmitting the non-leader messages too.
  bool omission_fallback = false;
};

/// Builds every X_S (leader-intersecting or not) without omission.
std::vector<Message> build_all_messages(const CachePlacement& pl,
                                        const SubspaceDecomposition& dec,
                                        const lp::Solution& sol,
                                        const DemandMatrix& demand);

/// Transmits X_S for S intersecting the leader set; the omitted messages are
/// rank-checked to be reconstructible from the transmitted ones, else the
/// transcript falls back to full transmission with the fallback flag set.
DeliveryTranscript deliver(const CachePlacement& pl,
                           const SubspaceDecomposition& dec,
                           const lp::Solution& sol, const DemandMatrix& demand);

/// Per user: does (cache rows + transmitted rows) span the demanded
/// function's B coordinate rows?
std::vector<bool> verify_decoding(const CachePlacement& pl,
                                  const DeliveryTranscript& tr,
                                  const DemandMatrix& demand);

/// True iff every omitted message lies in the row span of the transmitted
/// ones. Vacuously true when nothing was omitted.
bool verify_leader_omission(const DeliveryTranscript& tr,
                            const DemandMatrix& demand,
                            const std::vector<Message>& full_messages);

/// Monte-Carlo ranks of intersections and unions of s random cache
/// subspaces, compared against the generic profile tau_s / rho_s.
struct RankProfileEstimate {
  std::size_t B = 0;
  int trials = 0;
  // index s in [1:s_max]
  std::vector<int> intersection_matches;
  std::vector<int> union_matches;
  std::vector<double> mean_tau;
  std::vector<double> mean_rho;
};

RankProfileEstimate empirical_rank_profile(const bounds::SystemConfig& cfg,
                                           std::size_t B, int s_max, int trials,
                                           std::uint64_t seed);

enum class DemandMode { Canonical, RandomFullRank };

struct TrialResult {
  std::size_t B = 0;
  Rational measured_load;
  bool all_decoded = false;
  int placement_retries = 0;
  bool omission_fallback = false;
};

/// Full pipeline for one seed: place, decompose (with up to 5 re-seeded
/// retries), deliver, verify. Throws NonGenericPlacement only after the
/// retries are exhausted.
TrialResult run_trial(const bounds::SystemConfig& cfg, const lp::Solution& sol,
                      std::size_t B, std::uint64_t seed, DemandMode mode);

}  // namespace cachecalc::sim
