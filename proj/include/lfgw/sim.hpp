#ifndef LFGW_SIM_HPP
#define LFGW_SIM_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lfgw/env.hpp"
#include "lfgw/quenched.hpp"
#include "lfgw/stats.hpp"

namespace lfgw {

inline constexpr std::uint64_t kPopulationCap =
    (std::uint64_t{1} << 63) - 1;

struct SimOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  bool trace_z = false;
};

struct ReplicateRecord {
  std::uint64_t replicate = 0;
  std::uint64_t z_final = 0;
  bool saturated = false;
  bool survived = false;
  double weight = 1.0;     // importance weight; 1 under the plain measure
  double log_pi = 0.0;     // log Pi_n of the replicate's environment
  double r_dual = 0.0;     // R_n^(-1) of the replicate's environment
  std::vector<std::uint64_t> z_trace;  // filled only when trace_z is set
};

struct StepResult {
  std::uint64_t z;
  bool saturated;
};

// One generation: z independent offspring draws, each LF(pair.A, pair.B),
// summed in O(1) expected time via the binomial/negative-binomial split.
StepResult step_generation(std::uint64_t z, const EnvPair& pair,
                           RngStream& rng);

std::vector<ReplicateRecord> simulate_quenched(const EnvPath& path,
                                               std::uint64_t reps,
                                               const SimOptions& opts);

std::vector<ReplicateRecord> simulate_annealed(const EnvSpec& env,
                                               std::size_t n,
                                               std::uint64_t reps,
                                               const SimOptions& opts);

struct SurvivalEstimate {
  double p_hat;
  double stderr_;
};

// P(Z_n > 0) via the tilted dual-perpetuity representation; no population is
// simulated, only n environment steps per replicate.
SurvivalEstimate survival_importance(const EnvSpec& env, std::size_t n,
                                     std::uint64_t reps,
                                     const SimOptions& opts);

struct YaglomReport {
  std::vector<double> params;  // 1/(1 + R_k^(-1)) along the sampled path
  double finite_n_param;
  std::optional<double> limit_param;  // dual-tail estimate when available
  KsResult ks;
  std::uint64_t survivors;
};

// Samples one environment path, simulates the process under the reversed
// order, and checks the surviving replicates against the exact geometric
// conditional law.
YaglomReport yaglom_quenched_check(const EnvSpec& env, std::size_t n,
                                   std::uint64_t reps, const SimOptions& opts,
                                   double alpha = 1e-3);

struct MartingaleReport {
  MeanSd w_mean;
  double r_inf;
  double atom_freq;
  double atom_expected;  // 1 - 1/R_inf
  KsResult positive_ks;  // positive part of W_n against Exp(1/R_inf)
  std::uint64_t reps;
};

MartingaleReport martingale_check(const EnvSpec& env, std::size_t n,
                                  std::uint64_t reps, const SimOptions& opts,
                                  double alpha = 1e-3);
MartingaleReport martingale_check(const EnvPath& path, double r_inf,
                                  std::uint64_t reps, const SimOptions& opts,
                                  double alpha = 1e-3);

// One trace per replicate: (Z_{0,n}, Z_{1,n}, ..., Z_{n,n}), simulated
// forward through the reduced-offspring laws; nondecreasing by construction.
std::vector<std::vector<std::uint64_t>> reduced_simulate(
    const EnvPath& path, std::size_t n, std::uint64_t reps,
    const SimOptions& opts);

struct KozlovRow {
  std::uint64_t n;
  double p_hat;          // annealed survival, averaged quenched formula
  double sqrt_n_p_hat;
  double stderr_;
};

std::vector<KozlovRow> kozlov_scan(const EnvSpec& env,
                                   const std::vector<std::size_t>& n_grid,
                                   std::uint64_t reps,
                                   const SimOptions& opts);

// Runs fn(rep) for rep in [0, reps) across opts.workers threads. Each call
// writes only to its replicate's slot, so the schedule cannot affect results.
void parallel_for(std::uint64_t reps, unsigned workers,
                  const std::function<void(std::uint64_t)>& fn);

}  // namespace lfgw

#endif
