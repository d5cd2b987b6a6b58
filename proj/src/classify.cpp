#include "lfgw/classify.hpp"

#include <cmath>
#include <stdexcept>

#include "lfgw/errors.hpp"
#include "lfgw/logspace.hpp"
#include "lfgw/rng.hpp"

namespace lfgw {

namespace {

double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// E[X ; a < X < b] for X ~ N(mu, sigma^2)
double normal_partial_mean(double mu, double sigma, double a, double b) {
  const double alpha = (a - mu) / sigma;
  const double beta = (b - mu) / sigma;
  return mu * (norm_cdf(beta) - norm_cdf(alpha)) +
         sigma * (norm_pdf(alpha) - norm_pdf(beta));
}

// J-(y) = E[min(y, log- A)] and J+(y) = E[min(y, log+ A)] for y > 0.
double j_fun_table(const DiscreteTable& t, GmSide side, double y) {
  double acc = 0.0;
  for (const TableAtom& a : t.atoms) {
    const double la = std::log(a.A);
    const double part = side == GmSide::minus ? std::max(-la, 0.0)
                                              : std::max(la, 0.0);
    acc += a.w * std::min(y, part);
  }
  return acc;
}

double j_fun_lognormal(double mu, double sigma, GmSide side, double y) {
  // log A ~ N(mu, sigma^2); min(y, X+) = y 1{X >= y} + X 1{0 < X < y}
  if (side == GmSide::plus) {
    return y * (1.0 - norm_cdf((y - mu) / sigma)) +
           normal_partial_mean(mu, sigma, 0.0, y);
  }
  // log- A = (-X)+
  return y * norm_cdf((-y - mu) / sigma) -
         normal_partial_mean(mu, sigma, -y, 0.0);
}

bool side_degenerate(const EnvSpec& env, GmSide side) {
  // J- vanishes identically iff A >= 1 a.s.; J+ iff A <= 1 a.s.
  if (auto t = env.as_table()) {
    for (const TableAtom& a : t->atoms) {
      if (side == GmSide::minus && a.A < 1.0) return false;
      if (side == GmSide::plus && a.A > 1.0) return false;
    }
    return true;
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  if (std::holds_alternative<BRuleLine>(ln.b_rule)) {
    return side == GmSide::plus;  // A truncated to (0, 1)
  }
  return false;  // full lognormal support straddles 1
}

double abs_log_a_scale(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    double acc = 0.0;
    for (const TableAtom& a : t->atoms) acc += a.w * std::abs(std::log(a.A));
    return acc;
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  return std::abs(ln.mu) + ln.sigma;
}

}  // namespace

std::optional<double> fit_line(const EnvSpec& env, LineSign sign,
                               const Tolerances& tol) {
  if (const auto* ln = std::get_if<LogNormalA>(&env.variant())) {
    if (sign == LineSign::plus &&
        std::holds_alternative<BRuleLine>(ln->b_rule)) {
      return std::get<BRuleLine>(ln->b_rule).x;
    }
    return std::nullopt;
  }
  const DiscreteTable t = *env.as_table();
  double x = 0.0;
  bool have_x = false;
  for (const TableAtom& a : t.atoms) {
    const double denom = sign == LineSign::plus ? 1.0 - a.A : a.A - 1.0;
    if (std::abs(denom) > 1e-12) {
      x = a.B / denom;
      have_x = true;
      break;
    }
  }
  if (!have_x || !(x > 0.0)) return std::nullopt;
  for (const TableAtom& a : t.atoms) {
    const double pred = sign == LineSign::plus ? x * (1.0 - a.A)
                                               : x * (a.A - 1.0);
    if (std::abs(a.B - pred) > tol.line_fit * (1.0 + std::abs(x))) {
      return std::nullopt;
    }
  }
  return x;
}

GmIntegral gm_integral(const EnvSpec& env, GmSide side, std::uint64_t seed,
                       const Tolerances& tol) {
  if (side_degenerate(env, side)) {
    return GmIntegral{pos_inf, 0.0, true};
  }
  if (auto t = env.as_table()) {
    double acc = 0.0;
    for (const TableAtom& a : t->atoms) {
      const double v = side == GmSide::minus ? std::log(a.B)
                                             : std::log(a.B / a.A);
      if (v > 0.0) acc += a.w * v / j_fun_table(*t, side, v);
    }
    return GmIntegral{acc, 0.0, true};
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  if (side == GmSide::minus &&
      std::holds_alternative<BRuleConst>(ln.b_rule)) {
    // B is constant under this rule, so the integral is a point evaluation.
    const double v = std::log(std::get<BRuleConst>(ln.b_rule).B);
    const double val =
        v > 0.0 ? v / j_fun_lognormal(ln.mu, ln.sigma, side, v) : 0.0;
    return GmIntegral{val, 0.0, true};
  }
  // Monte Carlo over the law of (A, B), with a divergence cap. For the line
  // rule, J must be taken against the truncated law of A, which j_fun above
  // does not model, so sample pairs and average the empirical J as well.
  RngStream rng = make_stream(seed, 0, StreamPurpose::integral);
  const bool truncated = std::holds_alternative<BRuleLine>(ln.b_rule);
  double sum = 0.0;
  double sum_sq = 0.0;
  const std::size_t n = tol.mc_draws;
  for (std::size_t i = 0; i < n; ++i) {
    const EnvPair p = sample_pair(env, rng);
    const double v = side == GmSide::minus ? std::log(p.B)
                                           : std::log(p.B / p.A);
    double y = 0.0;
    if (v > 0.0) {
      const double j =
          truncated
              ? j_fun_lognormal(ln.mu, ln.sigma, side, v) /
                    norm_cdf(-ln.mu / ln.sigma)  // renormalized truncation
              : j_fun_lognormal(ln.mu, ln.sigma, side, v);
      y = v / j;
    }
    sum += y;
    sum_sq += y * y;
    if (sum / static_cast<double>(i + 1) > tol.gm_cap) {
      return GmIntegral{pos_inf, 0.0, false};
    }
  }
  const double mean = sum / static_cast<double>(n);
  const double var =
      std::max(0.0, sum_sq / static_cast<double>(n) - mean * mean);
  return GmIntegral{mean, std::sqrt(var / static_cast<double>(n)), false};
}

std::string to_string(TrichotomySubCase sub_case) {
  switch (sub_case) {
    case TrichotomySubCase::C1_1: return "C1.1";
    case TrichotomySubCase::C1_2: return "C1.2";
    case TrichotomySubCase::C2_1: return "C2.1";
    case TrichotomySubCase::C2_2: return "C2.2";
    case TrichotomySubCase::C3_1: return "C3.1";
    case TrichotomySubCase::C3_2: return "C3.2";
    case TrichotomySubCase::C3_3: return "C3.3";
    case TrichotomySubCase::C3_4: return "C3.4";
  }
  return "?";
}

std::string to_string(Criticality criticality) {
  switch (criticality) {
    case Criticality::supercritical: return "supercritical";
    case Criticality::subcritical: return "subcritical";
    case Criticality::critical: return "critical";
    case Criticality::strongly_critical: return "strongly critical";
  }
  return "?";
}

Trichotomy classify(const EnvSpec& env, std::uint64_t seed,
                    const Tolerances& tol) {
  Trichotomy out;
  TrichotomyEvidence& ev = out.evidence;

  if (a_identically_one(env)) {
    out.label = TrichotomyLabel::C3;
    out.sub_case = TrichotomySubCase::C3_4;
    out.criticality = Criticality::strongly_critical;
    ev.note = "A = 1 a.s.; Pi_n = 1 for all n";
    return out;
  }

  // The plus line pins R_inf = x regardless of the integral test, so it is
  // detected unconditionally. The minus line is only decisive when the
  // generic I+ test cannot certify C2, and a constant pair with A > 1 is
  // reported through the generic route (its I+ is exact).
  if (auto x = fit_line(env, LineSign::plus, tol)) {
    out.label = TrichotomyLabel::C1;
    out.sub_case = TrichotomySubCase::C1_2;
    out.criticality = Criticality::supercritical;
    ev.line_x = *x;
    ev.note = "B = x(1-A) a.s.; R_inf = x";
    return out;
  }
  const bool is_constant = std::holds_alternative<ConstantPair>(env.variant());
  if (!is_constant) {
    if (auto x = fit_line(env, LineSign::minus, tol)) {
      out.label = TrichotomyLabel::C2;
      out.sub_case = TrichotomySubCase::C2_2;
      out.criticality = Criticality::subcritical;
      ev.line_x = *x;
      ev.note = "B = x(A-1) a.s.; dual perpetuity = x";
      return out;
    }
  }

  const double drift = e_log_a(env);
  ev.drift = drift;
  if (!std::isfinite(drift)) {
    throw Unclassifiable("classify: E log A does not exist finitely");
  }
  const double band = tol.drift_zero * (1.0 + abs_log_a_scale(env));
  if (std::abs(drift) <= band) {
    out.label = TrichotomyLabel::C3;
    out.sub_case = TrichotomySubCase::C3_3;
    out.criticality = Criticality::critical;
    ev.note = "E log A = 0 with A not a.s. 1: Pi_n oscillates";
    return out;
  }

  const GmSide side = drift < 0.0 ? GmSide::minus : GmSide::plus;
  const GmIntegral gi = gm_integral(env, side, seed, tol);
  if (side == GmSide::minus) {
    ev.i_minus = gi;
  } else {
    ev.i_plus = gi;
  }
  if (!gi.exact && std::isfinite(gi.value) && gi.value > 0.1 * tol.gm_cap) {
    throw Unclassifiable(
        "classify: Monte Carlo Goldie-Maller integral too close to the cap");
  }
  if (drift < 0.0) {
    if (std::isfinite(gi.value)) {
      out.label = TrichotomyLabel::C1;
      out.sub_case = TrichotomySubCase::C1_1;
      out.criticality = Criticality::supercritical;
      ev.note = "Pi_n -> 0 and I- finite";
    } else {
      out.label = TrichotomyLabel::C3;
      out.sub_case = TrichotomySubCase::C3_1;
      out.criticality = Criticality::critical;
      ev.note = "Pi_n -> 0 but I- infinite";
    }
  } else {
    if (std::isfinite(gi.value)) {
      out.label = TrichotomyLabel::C2;
      out.sub_case = TrichotomySubCase::C2_1;
      out.criticality = Criticality::subcritical;
      ev.note = "Pi_n -> inf and I+ finite";
    } else {
      out.label = TrichotomyLabel::C3;
      out.sub_case = TrichotomySubCase::C3_2;
      out.criticality = Criticality::critical;
      ev.note = "Pi_n -> inf but I+ infinite";
    }
  }
  return out;
}

}  // namespace lfgw
