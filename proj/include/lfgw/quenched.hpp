#ifndef LFGW_QUENCHED_HPP
#define LFGW_QUENCHED_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "lfgw/affine.hpp"
#include "lfgw/env.hpp"
#include "lfgw/lf.hpp"
#include "lfgw/perpetuity.hpp"
#include "lfgw/rng.hpp"

namespace lfgw {

// A finite environment realization e_{1:n} with cached prefix states.
// Immutable after construction; concurrent queries are safe.
class EnvPath {
 public:
  explicit EnvPath(std::vector<EnvPair> pairs);
  static EnvPath sampled(const EnvSpec& env, std::size_t n, RngStream& rng);

  std::size_t size() const { return pairs_.size(); }
  const std::vector<EnvPair>& pairs() const { return pairs_; }
  const EnvPair& pair(std::size_t k) const;  // 1-based, e_k
  // Prefix state after the first k pairs; state(0) is the initial state.
  const PathState& state(std::size_t k) const;
  EnvPath reversed() const;

 private:
  std::vector<EnvPair> pairs_;
  std::vector<PathState> states_;
};

// Everything the closed forms give at a fixed time n along a fixed path.
struct QuenchedSnapshot {
  std::uint64_t n;
  LinearFractional law_zn;             // LF(Pi_n, R_n)
  double q_n;                          // 1 - 1/(Pi_n + R_n)
  GeomPlus cond_survival;              // Geom_+(1/(1 + M_n))
  LinearFractional reversed_law_zn;    // LF(Pi_n, Pi_n R_n^(-1))
  GeomPlus reversed_cond_survival;     // Geom_+(1/(1 + R_n^(-1)))
  double m_n;                          // R_n / Pi_n
};

QuenchedSnapshot snapshot(const EnvPath& path, std::size_t n);

// Parameters of the geometric law of Z_n given {Z_n > 0, Z_{n+l} = 0},
// under the forward and the reversed environment order.
struct EveParams {
  double param_fw;
  double param_rev;
};

EveParams eve_of_extinction(const EnvPath& path, std::size_t n, std::size_t l);

// a.s. limit of the reversed-order parameter as n -> infinity, with the dual
// perpetuity tail truncated by the eps machinery of dual_perpetuity_tail.
double eve_of_extinction_limit(const EnvPath& path, std::size_t l,
                               const EnvSpec& env, double eps,
                               std::uint64_t n_max, RngStream& rng);

struct ReducedLaw {
  GeomPlus forward;
  GeomPlus reversed;
};

// Law of Z_{m,n} (individuals of generation m with descendants at n) given
// survival to n, forward and reversed-order variants.
ReducedLaw reduced_law(const EnvPath& path, std::size_t m, std::size_t n);

// Common offspring law of the zeta_i^{l,m} in the reduced-process branching
// identity Z_{m,n} = sum_{i <= Z_{l,n}} zeta_i^{l,m}.
ReducedLaw reduced_offspring_law(const EnvPath& path, std::size_t l,
                                 std::size_t m, std::size_t n);

struct ExtinctionLimit {
  double q_e;            // 1 - 1/R_inf
  double second_order;   // 1/R_inf^2
  double r_inf;
  std::optional<double> achieved_bound;
};

ExtinctionLimit extinction_limit(const EnvSpec& env, double eps,
                                 std::uint64_t n_max, RngStream& rng);

struct MartingaleLimitLaw {
  double w0;        // 1 - 1/R_inf
  double exp_rate;  // 1/R_inf; mixture mean is exactly 1
};

MartingaleLimitLaw martingale_limit_law(double r_inf);

struct DecompositionLaws {
  LFMixture finite_line;
  GeomPlus infinite_line;
  double r_n_inf;  // 1/(1 - q(e_{>=n}))
};

// Finite/infinite line-of-descent offspring laws at generation step n
// (environment pair e_n), given the perpetuity value R_inf of the full path.
DecompositionLaws decomposition_laws(const EnvPath& path, std::size_t n,
                                     double r_inf);

struct CriticalDiag {
  std::uint64_t n;
  double m_n;
  double r_q_bar;      // R_n P(Z_n > 0 | e) = (1 + 1/M_n)^{-1}
  double cond_param;   // 1/(1 + M_n)
};

std::vector<CriticalDiag> critical_diagnostics(
    const EnvPath& path, const std::vector<std::size_t>& n_grid);

}  // namespace lfgw

#endif
