#ifndef LFGW_PERPETUITY_HPP
#define LFGW_PERPETUITY_HPP

#include <cstdint>
#include <optional>

#include "lfgw/affine.hpp"
#include "lfgw/classify.hpp"
#include "lfgw/env.hpp"
#include "lfgw/rng.hpp"

namespace lfgw {

struct PerpetuityResult {
  double r_inf;        // monotone lower-bound estimate of R_inf
  // Mean-level residual bound Pi_n E[B]/(1 - E[A]) when E[A] < 1; this bounds
  // the conditional mean of the remainder, not the a.s. remainder.
  std::optional<double> error_bound;
  std::uint64_t steps;
  PathState final_state;
};

// Extends the path by sampling `env` until the residual target eps is met.
// Throws DivergentPerpetuity when env is not supercritical (C1) and
// BudgetExceeded when n_max steps do not reach the target.
PerpetuityResult perpetuity_tail(const PathState& state, const EnvSpec& env,
                                 double eps, std::uint64_t n_max,
                                 RngStream& rng,
                                 const Tolerances& tol = default_tol());

// Same machinery applied to the dual series R^(-1): extends until the mean
// residual of sum_{k>n} Pi_k^{-1} B_k is below eps. Requires E[1/A] < 1
// (strongly/intermediately subcritical); throws TailUnavailable otherwise.
PerpetuityResult dual_perpetuity_tail(const PathState& state,
                                      const EnvSpec& env, double eps,
                                      std::uint64_t n_max, RngStream& rng);

}  // namespace lfgw

#endif
