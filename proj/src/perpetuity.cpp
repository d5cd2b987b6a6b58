#include "lfgw/perpetuity.hpp"

#include <cmath>

#include "lfgw/errors.hpp"

namespace lfgw {

namespace {

double e_b_over_a(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    double acc = 0.0;
    for (const TableAtom& a : t->atoms) acc += a.w * a.B / a.A;
    return acc;
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  if (const auto* c = std::get_if<BRuleConst>(&ln.b_rule)) {
    return c->B * std::exp(kappa(env));
  }
  return std::get<BRuleLine>(ln.b_rule).x * (std::exp(kappa(env)) - 1.0);
}

}  // namespace

PerpetuityResult perpetuity_tail(const PathState& state, const EnvSpec& env,
                                 double eps, std::uint64_t n_max,
                                 RngStream& rng, const Tolerances& tol) {
  if (!(eps > 0.0)) throw std::domain_error("perpetuity_tail: eps must be > 0");
  const Trichotomy tri = classify(env, /*seed=*/0, tol);
  if (tri.label != TrichotomyLabel::C1) {
    throw DivergentPerpetuity("perpetuity_tail: environment is not C1, R_inf = inf a.s.");
  }

  const double mean_a = e_a(env);
  const double mean_b = e_b(env);
  const bool have_bound = mean_a < 1.0 && std::isfinite(mean_b);
  const double bound_factor = have_bound ? mean_b / (1.0 - mean_a) : 0.0;

  PathState s = state;
  for (std::uint64_t i = 0; i < n_max; ++i) {
    const double residual =
        have_bound ? std::exp(s.log_pi) * bound_factor : std::exp(s.log_pi);
    if (residual < eps) {
      return PerpetuityResult{
          s.r(),
          have_bound ? std::optional<double>(residual) : std::nullopt,
          s.n - state.n, s};
    }
    s = step(s, sample_pair(env, rng));
  }
  throw BudgetExceeded("perpetuity_tail: n_max reached before eps target");
}

PerpetuityResult dual_perpetuity_tail(const PathState& state,
                                      const EnvSpec& env, double eps,
                                      std::uint64_t n_max, RngStream& rng) {
  if (!(eps > 0.0)) throw std::domain_error("dual_perpetuity_tail: eps must be > 0");
  const double mean_inv_a = std::exp(kappa(env));
  if (!(mean_inv_a < 1.0)) {
    throw TailUnavailable(
        "dual_perpetuity_tail: E[1/A] >= 1, no convergent mean bound");
  }
  const double bound_factor = e_b_over_a(env) / (1.0 - mean_inv_a);

  PathState s = state;
  for (std::uint64_t i = 0; i < n_max; ++i) {
    const double residual = std::exp(-s.log_pi) * bound_factor;
    if (residual < eps) {
      return PerpetuityResult{s.rdual(), residual, s.n - state.n, s};
    }
    s = step(s, sample_pair(env, rng));
  }
  throw BudgetExceeded("dual_perpetuity_tail: n_max reached before eps target");
}

}  // namespace lfgw
