#include "lfgw/quenched.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "lfgw/errors.hpp"
#include "lfgw/logspace.hpp"

namespace lfgw {

EnvPath::EnvPath(std::vector<EnvPair> pairs) : pairs_(std::move(pairs)) {
  states_.reserve(pairs_.size() + 1);
  PathState s;
  states_.push_back(s);
  for (const EnvPair& p : pairs_) {
    s = step(s, p);
    states_.push_back(s);
  }
}

EnvPath EnvPath::sampled(const EnvSpec& env, std::size_t n, RngStream& rng) {
  std::vector<EnvPair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) pairs.push_back(sample_pair(env, rng));
  return EnvPath(std::move(pairs));
}

const EnvPair& EnvPath::pair(std::size_t k) const {
  if (k == 0 || k > pairs_.size()) {
    throw std::out_of_range("EnvPath::pair: index out of range");
  }
  return pairs_[k - 1];
}

const PathState& EnvPath::state(std::size_t k) const {
  if (k >= states_.size()) {
    throw std::out_of_range("EnvPath::state: index past path length");
  }
  return states_[k];
}

EnvPath EnvPath::reversed() const {
  return EnvPath(std::vector<EnvPair>(pairs_.rbegin(), pairs_.rend()));
}

QuenchedSnapshot snapshot(const EnvPath& path, std::size_t n) {
  const PathState& st = path.state(n);
  const double lab = log_sum_exp(st.log_pi, st.log_r);
  // 1/(1 + M_n) = Pi_n/(Pi_n + R_n); same cancellation for the reversed form.
  const double cond_p = std::exp(st.log_pi - lab);
  const double rev_p = std::exp(-log_sum_exp(0.0, st.log_rdual));
  return QuenchedSnapshot{
      static_cast<std::uint64_t>(n),
      LinearFractional::from_logs(st.log_pi, st.log_r),
      -std::expm1(-lab),
      GeomPlus(cond_p),
      LinearFractional::from_logs(st.log_pi, st.log_pi + st.log_rdual),
      GeomPlus(rev_p),
      st.m()};
}

EveParams eve_of_extinction(const EnvPath& path, std::size_t n,
                            std::size_t l) {
  if (l == 0) {
    throw std::domain_error("eve_of_extinction: l must be >= 1");
  }
  const PathState& sn = path.state(n);
  const PathState& snl = path.state(n + l);

  // Forward order: the segment e_{n+1:n+l} has Pi = Pi_{n+l}/Pi_n and
  // R = (R_{n+l} - R_n)/Pi_n; its extinction probability q_seg combines with
  // the one-step survival factor Pi_n (1 - q_n) = Pi_n/(Pi_n + R_n).
  const double log_pi_seg = snl.log_pi - sn.log_pi;
  const double log_r_seg = snl.log_r == neg_inf
                               ? neg_inf
                               : log_diff_exp(snl.log_r, sn.log_r) - sn.log_pi;
  const double q_seg = -std::expm1(-log_sum_exp(log_pi_seg, log_r_seg));
  const double surv_n =
      std::exp(sn.log_pi - log_sum_exp(sn.log_pi, sn.log_r));
  const double param_fw = 1.0 - q_seg * (1.0 - surv_n);

  // Reversed order: mixture weight 1/(Pi_l (1 + R_l^(-1))) on the pure
  // geometric 1, remainder geometric with parameter 1/(1 + R_{l,n}^(-1)),
  // R_{l,n}^(-1) = Pi_l (R_{n+l}^(-1) - R_l^(-1)).
  const PathState& sl = path.state(l);
  const double t1 =
      std::exp(-(sl.log_pi + log_sum_exp(0.0, sl.log_rdual)));
  double param_rev;
  if (n == 0) {
    param_rev = 1.0;
  } else {
    const double log_rln =
        sl.log_pi + log_diff_exp(snl.log_rdual, sl.log_rdual);
    param_rev = t1 + (1.0 - t1) * std::exp(-log_sum_exp(0.0, log_rln));
  }
  return EveParams{param_fw, param_rev};
}

double eve_of_extinction_limit(const EnvPath& path, std::size_t l,
                               const EnvSpec& env, double eps,
                               std::uint64_t n_max, RngStream& rng) {
  if (l == 0 || l > path.size()) {
    throw std::domain_error("eve_of_extinction_limit: need 1 <= l <= path size");
  }
  const PathState& sl = path.state(l);
  const double t1 =
      std::exp(-(sl.log_pi + log_sum_exp(0.0, sl.log_rdual)));
  // R_{l,inf}^(-1) = Pi_l (R_inf^(-1) - R_l^(-1)), with the dual tail past l
  // resolved by fresh sampling from env.
  const PerpetuityResult tail = dual_perpetuity_tail(sl, env, eps, n_max, rng);
  const double log_rdual_inf = tail.final_state.log_rdual;
  double log_rl_inf = neg_inf;
  if (log_rdual_inf > sl.log_rdual) {
    log_rl_inf = sl.log_pi + log_diff_exp(log_rdual_inf, sl.log_rdual);
  }
  return t1 + (1.0 - t1) * std::exp(-log_sum_exp(0.0, log_rl_inf));
}

ReducedLaw reduced_law(const EnvPath& path, std::size_t m, std::size_t n) {
  if (m > n) throw std::domain_error("reduced_law: need m <= n");
  const PathState& sm = path.state(m);
  const PathState& sn = path.state(n);
  const double lab = log_sum_exp(sn.log_pi, sn.log_r);
  // 1 - R_m/(Pi_n + R_n); R_m <= R_n < Pi_n + R_n keeps the log-diff valid.
  const double p_fw =
      sm.log_r == neg_inf ? 1.0 : std::exp(log_diff_exp(lab, sm.log_r) - lab);
  const PathState& snm = path.state(n - m);
  const double p_rev = std::exp(log_sum_exp(0.0, snm.log_rdual) -
                                log_sum_exp(0.0, sn.log_rdual));
  return ReducedLaw{GeomPlus(p_fw), GeomPlus(p_rev)};
}

ReducedLaw reduced_offspring_law(const EnvPath& path, std::size_t l,
                                 std::size_t m, std::size_t n) {
  if (!(l <= m && m <= n)) {
    throw std::domain_error("reduced_offspring_law: need l <= m <= n");
  }
  const PathState& sl = path.state(l);
  const PathState& sm = path.state(m);
  const PathState& sn = path.state(n);
  const double lab = log_sum_exp(sn.log_pi, sn.log_r);
  // (Pi_n + R_n - R_m) / (Pi_n + R_n - R_l)
  const double log_num =
      sm.log_r == neg_inf ? lab : log_diff_exp(lab, sm.log_r);
  const double log_den =
      sl.log_r == neg_inf ? lab : log_diff_exp(lab, sl.log_r);
  const double p_fw = std::exp(log_num - log_den);
  const PathState& snm = path.state(n - m);
  const PathState& snl = path.state(n - l);
  const double p_rev = std::exp(log_sum_exp(0.0, snm.log_rdual) -
                                log_sum_exp(0.0, snl.log_rdual));
  return ReducedLaw{GeomPlus(p_fw), GeomPlus(p_rev)};
}

ExtinctionLimit extinction_limit(const EnvSpec& env, double eps,
                                 std::uint64_t n_max, RngStream& rng) {
  const PathState init;
  const PerpetuityResult res = perpetuity_tail(init, env, eps, n_max, rng);
  double r_inf = res.r_inf;
  // The true R_inf is >= 1; a truncated estimate can fall just short of the
  // boundary case, so snap it back within the residual target.
  const double slack = res.error_bound ? std::max(*res.error_bound, eps) : eps;
  if (r_inf < 1.0 && r_inf >= 1.0 - slack) r_inf = 1.0;
  if (!(r_inf >= 1.0)) {
    throw MomentDiverged("extinction_limit: perpetuity estimate below 1");
  }
  return ExtinctionLimit{1.0 - 1.0 / r_inf, 1.0 / (r_inf * r_inf), r_inf,
                         res.error_bound};
}

MartingaleLimitLaw martingale_limit_law(double r_inf) {
  if (!(r_inf >= 1.0) || !std::isfinite(r_inf)) {
    throw std::domain_error("martingale_limit_law: need finite R_inf >= 1");
  }
  return MartingaleLimitLaw{1.0 - 1.0 / r_inf, 1.0 / r_inf};
}

DecompositionLaws decomposition_laws(const EnvPath& path, std::size_t n,
                                     double r_inf) {
  if (n == 0 || n > path.size()) {
    throw std::domain_error("decomposition_laws: need 1 <= n <= path size");
  }
  if (!std::isfinite(r_inf)) {
    throw std::domain_error("decomposition_laws: R_inf must be finite");
  }
  const PathState& before = path.state(n - 1);
  const PathState& after = path.state(n);
  // rho_k = 1/(1 - q(e_{>=k})) = (R_inf - R_{k-1})/Pi_{k-1}; the shifted
  // environment satisfies rho_k = A_k rho_{k+1} + B_k.
  const double rho_n = (r_inf - before.r()) / before.pi();
  const double rho_np1 = (r_inf - after.r()) / after.pi();
  if (!(rho_n > 1.0) || !(rho_np1 > 1.0)) {
    throw DegenerateDecomposition(
        "decomposition_laws: shifted extinction probability is 0 "
        "(conditioning event has full mass)");
  }
  const EnvPair& e = path.pair(n);
  const double c = e.A + e.B;
  const double w0 = (c - 1.0) * rho_n / (c * (rho_n - 1.0));
  const double p_fin = rho_n / (c * rho_np1);
  const double p_inf = 1.0 - e.B / rho_n;
  if (!(w0 >= 0.0) || !(w0 <= 1.0) || !(p_fin > 0.0) || !(p_fin <= 1.0) ||
      !(p_inf > 0.0) || !(p_inf <= 1.0)) {
    throw DegenerateDecomposition(
        "decomposition_laws: R_inf inconsistent with the path segment");
  }
  return DecompositionLaws{LFMixture{w0, GeomPlus(p_fin)}, GeomPlus(p_inf),
                           rho_n};
}

std::vector<CriticalDiag> critical_diagnostics(
    const EnvPath& path, const std::vector<std::size_t>& n_grid) {
  std::vector<CriticalDiag> out;
  out.reserve(n_grid.size());
  for (std::size_t n : n_grid) {
    const PathState& st = path.state(n);
    const double lab = log_sum_exp(st.log_pi, st.log_r);
    out.push_back(CriticalDiag{
        static_cast<std::uint64_t>(n), st.m(),
        st.log_r == neg_inf ? 0.0 : std::exp(st.log_r - lab),
        std::exp(st.log_pi - lab)});
  }
  return out;
}

}  // namespace lfgw
