#ifndef LFGW_CONFIG_HPP
#define LFGW_CONFIG_HPP

#include <cstddef>

namespace lfgw {

// Central record of numeric tolerances and budgets. Every module pulls its
// thresholds from here so they can be audited (and overridden) in one place.
struct Tolerances {
  double param_eq = 1e-12;        // closed-form parameter identities
  double line_fit = 1e-9;         // degenerate-line detection, relative
  double drift_zero = 1e-12;      // |E log A| treated as zero (exact envs)
  double psi_prime_zero = 1e-12;  // intermediate-regime band (exact envs)
  double moment_cap = 1e9;        // running MC mean above this => diverged
  double gm_cap = 1e6;            // Goldie-Maller integral cap => infinite
  double tail_mass = 1e-12;       // pmf truncation for TV against exact laws
  double perpetuity_eps = 1e-10;  // default residual target for R_inf
  std::size_t mc_draws = 100000;  // default MC budget for integral estimates
  std::size_t perpetuity_n_max = 1u << 20;
};

inline const Tolerances& default_tol() {
  static Tolerances t;
  return t;
}

}  // namespace lfgw

#endif
