// Experiment runner: sweeps memory-ratio grids, evaluates every scheme's
// memory-load curve, and optionally validates the linear-placement scheme
// constructively by simulating placement, delivery, and decoding.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "cachecalc/bounds.hpp"
#include "cachecalc/gf.hpp"
#include "cachecalc/lp.hpp"
#include "cachecalc/rational.hpp"
#include "cachecalc/sim.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using cachecalc::Rational;
namespace bounds = cachecalc::bounds;
namespace lp = cachecalc::lp;
namespace sim = cachecalc::sim;

const std::vector<std::string> kSchemeOrder = {"linp",  "uncoded", "mds",
                                               "yma",   "converse", "table1"};

struct RunSpec {
  int K = 0;
  int N = 0;
  std::vector<Rational> gammas;
  std::vector<std::string> schemes;
  bool with_sim = false;
  std::size_t B_min = 24;
  int trials = 10;
  std::uint64_t seed = 1;
  std::string format = "tsv";
  std::string out = "-";
};

bool parse_gamma_grid(const std::string& text, std::vector<Rational>& out) {
  out.clear();
  const auto c1 = text.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = text.find(':', c1 + 1);
    if (c2 == std::string::npos) return false;
    auto start = cachecalc::parse_rational(text.substr(0, c1));
    auto step = cachecalc::parse_rational(text.substr(c1 + 1, c2 - c1 - 1));
    auto end = cachecalc::parse_rational(text.substr(c2 + 1));
    if (!start || !step || !end || *step <= 0) return false;
    for (Rational g = *start; g <= *end; g += *step) out.push_back(g);
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto g = cachecalc::parse_rational(item);
      if (!g) return false;
      out.push_back(*g);
    }
  }
  if (out.empty()) return false;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0 || out[i] > 1) return false;
    if (i > 0 && out[i] <= out[i - 1]) return false;
  }
  return true;
}

struct SimSummary {
  std::size_t B = 0;
  Rational measured;
  int decode_passes = 0;
  int fallbacks = 0;
  bool load_consistent = true;
};

SimSummary run_sim_trials(const bounds::SystemConfig& cfg, const lp::Solution& sol,
                          const RunSpec& spec) {
  SimSummary s;
  s.B = sim::choose_block_size(cfg, sol, spec.B_min);
  for (int t = 0; t < spec.trials; ++t) {
    const std::uint64_t trial_seed = spec.seed + 1000003ULL * static_cast<std::uint64_t>(t);
    const auto r = sim::run_trial(cfg, sol, s.B, trial_seed, sim::DemandMode::Canonical);
    if (t == 0)
      s.measured = r.measured_load;
    else if (r.measured_load != s.measured)
      s.load_consistent = false;
    if (r.all_decoded) ++s.decode_passes;
    if (r.omission_fallback) ++s.fallbacks;
  }
  return s;
}

int run_command(const RunSpec& spec) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (spec.out != "-") {
    file.open(spec.out);
    if (!file) {
      std::cerr << "cannot open output path: " << spec.out << "\n";
      return 1;
    }
    os = &file;
  }
  const char delim = spec.format == "csv" ? ',' : '\t';

  std::vector<std::string> cols;
  for (const auto& name : kSchemeOrder)
    if (std::find(spec.schemes.begin(), spec.schemes.end(), name) != spec.schemes.end())
      cols.push_back(name);

  *os << "# meta: K=" << spec.K << " N=" << spec.N << " seed=" << spec.seed
      << " prime=" << cachecalc::gf::prime() << " version=" << kVersion << "\n";
  if (std::find(cols.begin(), cols.end(), "converse") != cols.end())
    *os << "# converse: max(delta1, delta2) for single-file linear placement; "
           "general-placement bounds from the literature are not overlaid\n";
  *os << "gamma";
  for (const auto& c : cols) *os << delim << c;
  if (spec.with_sim) *os << delim << "sim_load" << delim << "sim_ok";
  *os << "\n";

  bool sim_failure = false;
  for (const auto& g : spec.gammas) {
    bounds::SystemConfig cfg(spec.K, spec.N, g);
    std::map<std::string, std::string> value;
    lp::Solution sol;
    bool have_sol = false;
    if (std::find(cols.begin(), cols.end(), "linp") != cols.end()) {
      sol = lp::solve(cfg);
      have_sol = true;
      value["linp"] = cachecalc::to_string(sol.objective);
    }
    if (std::find(cols.begin(), cols.end(), "uncoded") != cols.end())
      value["uncoded"] = cachecalc::to_string(bounds::uncoded_load(cfg));
    if (std::find(cols.begin(), cols.end(), "mds") != cols.end())
      value["mds"] = cachecalc::to_decimal_string(bounds::mds_load(cfg).load);
    if (std::find(cols.begin(), cols.end(), "yma") != cols.end())
      value["yma"] = cachecalc::to_string(bounds::yma_envelope_value(cfg, g));
    if (std::find(cols.begin(), cols.end(), "converse") != cols.end())
      value["converse"] = cachecalc::to_string(bounds::best_converse(cfg));
    if (std::find(cols.begin(), cols.end(), "table1") != cols.end()) {
      auto t = bounds::table1_load(cfg);
      value["table1"] = t ? cachecalc::to_string(*t) : "-";
    }
    *os << cachecalc::to_string(g);
    for (const auto& c : cols) *os << delim << value[c];
    if (spec.with_sim) {
      const auto s = run_sim_trials(cfg, sol, spec);
      (void)have_sol;
      *os << delim << cachecalc::to_string(s.measured) << delim << s.decode_passes
          << "/" << spec.trials;
      if (s.decode_passes != spec.trials || !s.load_consistent) sim_failure = true;
    }
    *os << "\n";
  }
  if (sim_failure) {
    std::cerr << "simulation reported decode failures\n";
    return 1;
  }
  return 0;
}

int verify_command(const RunSpec& spec) {
  std::ofstream file;
  std::ostream* os = &std::cout;
  if (spec.out != "-") {
    file.open(spec.out);
    if (!file) {
      std::cerr << "cannot open output path: " << spec.out << "\n";
      return 1;
    }
    os = &file;
  }
  *os << "# meta: K=" << spec.K << " N=" << spec.N << " seed=" << spec.seed
      << " prime=" << cachecalc::gf::prime() << " version=" << kVersion << "\n";
  bool failure = false;
  for (const auto& g : spec.gammas) {
    bounds::SystemConfig cfg(spec.K, spec.N, g);
    const auto sol = lp::solve(cfg);
    const auto s = run_sim_trials(cfg, sol, spec);
    *os << "gamma=" << cachecalc::to_string(g)
        << " lp=" << cachecalc::to_string(sol.objective)
        << " sim=" << cachecalc::to_string(s.measured) << " decode=" << s.decode_passes
        << "/" << spec.trials << " fallback=" << s.fallbacks << "\n";
    if (s.measured != sol.objective || s.decode_passes != spec.trials ||
        !s.load_consistent)
      failure = true;
  }
  return failure ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("CACHECALC_PRIME")) {
    try {
      cachecalc::gf::set_prime(std::strtoull(env, nullptr, 10));
    } catch (const std::exception& e) {
      std::cerr << "CACHECALC_PRIME: " << e.what() << "\n";
      return 1;
    }
  }

  CLI::App app{"memory-load tradeoff curves for decentralized coded caching"};
  app.require_subcommand(1);

  RunSpec spec;
  std::string gamma_text, schemes_text = "linp,uncoded,converse";

  auto add_common = [&](CLI::App* cmd, bool with_schemes) {
    cmd->add_option("--K", spec.K, "active user count")->required();
    cmd->add_option("--N", spec.N, "file count")->required();
    cmd->add_option("--gamma", gamma_text,
                    "memory-ratio grid: start:step:end or comma list (exact rationals)")
        ->required();
    if (with_schemes)
      cmd->add_option("--schemes", schemes_text,
                      "comma list from {linp,uncoded,mds,yma,converse,table1}");
    cmd->add_option("--B-min", spec.B_min, "minimum symbols per file");
    cmd->add_option("--trials", spec.trials, "simulation trials per grid point");
    cmd->add_option("--seed", spec.seed, "base RNG seed");
    cmd->add_option("--format", spec.format, "tsv or csv")
        ->check(CLI::IsMember({"tsv", "csv"}));
    cmd->add_option("--out", spec.out, "output path, '-' for stdout");
  };

  CLI::App* run = app.add_subcommand("run", "compute tradeoff tables");
  add_common(run, true);
  run->add_flag("--sim", spec.with_sim, "simulate the linear-placement scheme per grid point");

  CLI::App* verify = app.add_subcommand("verify", "constructive validation against the program optimum");
  add_common(verify, false);

  CLI11_PARSE(app, argc, argv);

  if (!parse_gamma_grid(gamma_text, spec.gammas)) {
    std::cerr << "invalid --gamma grid: must be nonempty, strictly increasing, within [0,1]\n";
    return 1;
  }
  if (spec.K < 1 || spec.N < 1) {
    std::cerr << "--K and --N must be positive\n";
    return 1;
  }
  if (spec.trials < 1) {
    std::cerr << "--trials must be positive\n";
    return 1;
  }

  try {
    if (run->parsed()) {
      std::stringstream ss(schemes_text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (std::find(kSchemeOrder.begin(), kSchemeOrder.end(), item) == kSchemeOrder.end()) {
          std::cerr << "unknown scheme: " << item << "\n";
          return 1;
        }
        spec.schemes.push_back(item);
      }
      if (spec.with_sim &&
          std::find(spec.schemes.begin(), spec.schemes.end(), "linp") == spec.schemes.end()) {
        std::cerr << "--sim requires the linp scheme\n";
        return 1;
      }
      return run_command(spec);
    }
    return verify_command(spec);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
