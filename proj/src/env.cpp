#include "lfgw/env.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "lfgw/errors.hpp"

namespace lfgw {

namespace {

constexpr double kAtomWeightSlack = 1e-9;

double norm_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI);
}

double norm_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Mean and variance of X ~ N(mu, sigma^2) conditioned on X < c.
double truncated_mean(double mu, double sigma, double c) {
  const double beta = (c - mu) / sigma;
  return mu - sigma * norm_pdf(beta) / norm_cdf(beta);
}

double truncated_var(double mu, double sigma, double c) {
  const double beta = (c - mu) / sigma;
  const double lam = norm_pdf(beta) / norm_cdf(beta);
  return sigma * sigma * (1.0 - beta * lam - lam * lam);
}

void validate_atoms(const std::vector<TableAtom>& atoms) {
  if (atoms.empty()) {
    throw std::domain_error("DiscreteTable: needs at least one atom");
  }
  double sum = 0.0;
  for (const TableAtom& a : atoms) {
    EnvPair check(a.A, a.B);  // A > 0, B > 0, A + B >= 1
    if (!(a.w > 0.0)) {
      throw std::domain_error("DiscreteTable: weights must be positive");
    }
    sum += a.w;
  }
  if (std::abs(sum - 1.0) > kAtomWeightSlack) {
    throw std::domain_error("DiscreteTable: weights must sum to 1");
  }
}

double induced_b(const DegenerateLine& d, double a) {
  return d.sign == LineSign::plus ? d.x * (1.0 - a) : d.x * (a - 1.0);
}

DiscreteTable line_as_table(const DegenerateLine& d) {
  DiscreteTable t;
  for (const AtomA& a : d.law_of_a) {
    t.atoms.push_back({a.A, induced_b(d, a.A), a.w});
  }
  return t;
}

template <class F>
double table_mean(const DiscreteTable& t, F&& f) {
  double acc = 0.0;
  for (const TableAtom& a : t.atoms) acc += a.w * f(a);
  return acc;
}

// E[(1/A)^theta] over the table, together with E[log(1/A) (1/A)^theta].
struct TiltedLogMoments {
  double m0;
  double m1;
};

TiltedLogMoments table_tilted(const DiscreteTable& t, double theta) {
  TiltedLogMoments r{0.0, 0.0};
  for (const TableAtom& a : t.atoms) {
    const double la = std::log(a.A);
    const double w = a.w * std::exp(-theta * la);
    r.m0 += w;
    r.m1 += w * (-la);
  }
  return r;
}

void check_theta(double theta) {
  if (!(theta >= 0.0) || theta > 1.0) {
    throw std::domain_error("psi: theta must lie in [0, 1]");
  }
}

}  // namespace

EnvSpec EnvSpec::constant(double A, double B) {
  EnvPair check(A, B);
  return EnvSpec(Variant{ConstantPair{A, B}});
}

EnvSpec EnvSpec::table(std::vector<TableAtom> atoms) {
  validate_atoms(atoms);
  double sum = 0.0;
  for (const TableAtom& a : atoms) sum += a.w;
  for (TableAtom& a : atoms) a.w /= sum;
  return EnvSpec(Variant{DiscreteTable{std::move(atoms)}});
}

EnvSpec EnvSpec::lognormal(double mu, double sigma, BRule b_rule) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("LogNormalA: sigma must be positive");
  }
  if (const auto* c = std::get_if<BRuleConst>(&b_rule)) {
    if (!(c->B >= 1.0)) {
      // A + B >= 1 must hold a.s. while A can be arbitrarily small.
      throw std::domain_error("LogNormalA: constant B must be >= 1");
    }
  } else {
    const auto& l = std::get<BRuleLine>(b_rule);
    if (!(l.x >= 1.0)) {
      throw std::domain_error("LogNormalA: line parameter x must be >= 1");
    }
  }
  return EnvSpec(Variant{LogNormalA{mu, sigma, b_rule}});
}

EnvSpec EnvSpec::degenerate_line(double x, LineSign sign,
                                 std::vector<AtomA> law_of_a) {
  if (law_of_a.empty()) {
    throw std::domain_error("DegenerateLine: needs at least one atom of A");
  }
  if (sign == LineSign::plus && !(x >= 1.0)) {
    throw std::domain_error("DegenerateLine: plus line requires x >= 1");
  }
  if (sign == LineSign::minus && !(x > 0.0)) {
    throw std::domain_error("DegenerateLine: minus line requires x > 0");
  }
  double sum = 0.0;
  for (const AtomA& a : law_of_a) {
    if (!(a.w > 0.0)) {
      throw std::domain_error("DegenerateLine: weights must be positive");
    }
    const double b = sign == LineSign::plus ? x * (1.0 - a.A) : x * (a.A - 1.0);
    EnvPair check(a.A, b);  // forces A < 1 on plus lines, A > 1 on minus lines
    sum += a.w;
  }
  if (std::abs(sum - 1.0) > kAtomWeightSlack) {
    throw std::domain_error("DegenerateLine: weights must sum to 1");
  }
  for (AtomA& a : law_of_a) a.w /= sum;
  return EnvSpec(Variant{DegenerateLine{x, sign, std::move(law_of_a)}});
}

std::optional<DiscreteTable> EnvSpec::as_table() const {
  if (const auto* c = std::get_if<ConstantPair>(&v_)) {
    return DiscreteTable{{TableAtom{c->A, c->B, 1.0}}};
  }
  if (const auto* t = std::get_if<DiscreteTable>(&v_)) {
    return *t;
  }
  if (const auto* d = std::get_if<DegenerateLine>(&v_)) {
    return line_as_table(*d);
  }
  return std::nullopt;
}

EnvPair sample_pair(const EnvSpec& env, RngStream& rng) {
  return std::visit(
      [&rng](const auto& v) -> EnvPair {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantPair>) {
          return EnvPair(v.A, v.B);
        } else if constexpr (std::is_same_v<T, DiscreteTable>) {
          double u = rng.next_double();
          for (const TableAtom& a : v.atoms) {
            if (u < a.w) return EnvPair(a.A, a.B);
            u -= a.w;
          }
          const TableAtom& last = v.atoms.back();
          return EnvPair(last.A, last.B);
        } else if constexpr (std::is_same_v<T, DegenerateLine>) {
          double u = rng.next_double();
          for (const AtomA& a : v.law_of_a) {
            if (u < a.w) return EnvPair(a.A, induced_b(v, a.A));
            u -= a.w;
          }
          const AtomA& last = v.law_of_a.back();
          return EnvPair(last.A, induced_b(v, last.A));
        } else {
          static_assert(std::is_same_v<T, LogNormalA>);
          const bool truncated = std::holds_alternative<BRuleLine>(v.b_rule);
          double a;
          do {
            const double u1 = rng.next_double();
            const double u2 = rng.next_double();
            const double z =
                std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            a = std::exp(v.mu + v.sigma * z);
          } while (truncated && a >= 1.0);
          const double b = truncated ? std::get<BRuleLine>(v.b_rule).x * (1.0 - a)
                                     : std::get<BRuleConst>(v.b_rule).B;
          return EnvPair(a, b);
        }
      },
      env.variant());
}

double e_log_a(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    return table_mean(*t, [](const TableAtom& a) { return std::log(a.A); });
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  if (std::holds_alternative<BRuleLine>(ln.b_rule)) {
    return truncated_mean(ln.mu, ln.sigma, 0.0);
  }
  return ln.mu;
}

double var_log_a(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    const double m = e_log_a(env);
    return table_mean(*t, [m](const TableAtom& a) {
      const double d = std::log(a.A) - m;
      return d * d;
    });
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  if (std::holds_alternative<BRuleLine>(ln.b_rule)) {
    return truncated_var(ln.mu, ln.sigma, 0.0);
  }
  return ln.sigma * ln.sigma;
}

double e_a(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    return table_mean(*t, [](const TableAtom& a) { return a.A; });
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  const double full = std::exp(ln.mu + 0.5 * ln.sigma * ln.sigma);
  if (std::holds_alternative<BRuleLine>(ln.b_rule)) {
    // E[A | A < 1] via the lognormal partial moment
    const double num = norm_cdf((-ln.mu - ln.sigma * ln.sigma) / ln.sigma);
    const double den = norm_cdf(-ln.mu / ln.sigma);
    return full * num / den;
  }
  return full;
}

double e_b(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    return table_mean(*t, [](const TableAtom& a) { return a.B; });
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  if (std::holds_alternative<BRuleLine>(ln.b_rule)) {
    return std::get<BRuleLine>(ln.b_rule).x * (1.0 - e_a(env));
  }
  return std::get<BRuleConst>(ln.b_rule).B;
}

double e_log_b(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    return table_mean(*t, [](const TableAtom& a) { return std::log(a.B); });
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  if (std::holds_alternative<BRuleConst>(ln.b_rule)) {
    return std::log(std::get<BRuleConst>(ln.b_rule).B);
  }
  throw std::logic_error("e_log_b: no closed form for the lognormal line rule");
}

bool a_identically_one(const EnvSpec& env) {
  if (auto t = env.as_table()) {
    for (const TableAtom& a : t->atoms) {
      if (std::abs(a.A - 1.0) > 1e-15) return false;
    }
    return true;
  }
  return false;
}

double psi(const EnvSpec& env, double theta) {
  check_theta(theta);
  if (auto t = env.as_table()) {
    return std::log(table_tilted(*t, theta).m0);
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  const double base = -theta * ln.mu + 0.5 * theta * theta * ln.sigma * ln.sigma;
  if (std::holds_alternative<BRuleLine>(ln.b_rule)) {
    const double zt = (theta * ln.sigma * ln.sigma - ln.mu) / ln.sigma;
    const double z0 = -ln.mu / ln.sigma;
    return base + std::log(norm_cdf(zt)) - std::log(norm_cdf(z0));
  }
  return base;
}

double psi_prime(const EnvSpec& env, double theta) {
  check_theta(theta);
  if (auto t = env.as_table()) {
    const TiltedLogMoments m = table_tilted(*t, theta);
    return m.m1 / m.m0;
  }
  const auto& ln = std::get<LogNormalA>(env.variant());
  const double base = -ln.mu + theta * ln.sigma * ln.sigma;
  if (std::holds_alternative<BRuleLine>(ln.b_rule)) {
    const double zt = (theta * ln.sigma * ln.sigma - ln.mu) / ln.sigma;
    return base + ln.sigma * norm_pdf(zt) / norm_cdf(zt);
  }
  return base;
}

double kappa(const EnvSpec& env) { return psi(env, 1.0); }

std::string to_string(SubcriticalRegime::Label label) {
  switch (label) {
    case SubcriticalRegime::Label::strongly: return "strongly";
    case SubcriticalRegime::Label::intermediately: return "intermediately";
    case SubcriticalRegime::Label::weakly: return "weakly";
    case SubcriticalRegime::Label::not_subcritical: return "not_subcritical";
  }
  return "?";
}

SubcriticalRegime subregime(const EnvSpec& env, const Tolerances& tol) {
  SubcriticalRegime r;
  r.psi0_prime = psi_prime(env, 0.0);
  r.psi1_prime = psi_prime(env, 1.0);
  r.kappa = kappa(env);
  if (!std::isfinite(r.psi0_prime) || !std::isfinite(r.psi1_prime)) {
    throw MomentDiverged("subregime: psi' not finite");
  }
  const double band = tol.psi_prime_zero * (1.0 + std::abs(r.psi0_prime));
  if (r.psi0_prime >= 0.0) {
    r.label = SubcriticalRegime::Label::not_subcritical;
  } else if (r.psi1_prime < -band) {
    r.label = SubcriticalRegime::Label::strongly;
  } else if (std::abs(r.psi1_prime) <= band) {
    // psi'(1) = 0 is a measure-zero condition; all built-in variants carry
    // closed-form psi', so equality within the band is accepted as exact.
    r.label = SubcriticalRegime::Label::intermediately;
  } else {
    r.label = SubcriticalRegime::Label::weakly;
  }
  return r;
}

EnvSpec tilt(const EnvSpec& env) {
  const double k = kappa(env);
  if (!std::isfinite(k)) throw MomentDiverged("tilt: kappa not finite");
  return std::visit(
      [&](const auto& v) -> EnvSpec {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantPair>) {
          return EnvSpec::constant(v.A, v.B);
        } else if constexpr (std::is_same_v<T, DiscreteTable>) {
          std::vector<TableAtom> atoms = v.atoms;
          double sum = 0.0;
          for (TableAtom& a : atoms) {
            a.w = a.w / a.A;
            sum += a.w;
          }
          for (TableAtom& a : atoms) a.w /= sum;
          return EnvSpec::table(std::move(atoms));
        } else if constexpr (std::is_same_v<T, DegenerateLine>) {
          std::vector<AtomA> atoms = v.law_of_a;
          double sum = 0.0;
          for (AtomA& a : atoms) {
            a.w = a.w / a.A;
            sum += a.w;
          }
          for (AtomA& a : atoms) a.w /= sum;
          return EnvSpec::degenerate_line(v.x, v.sign, std::move(atoms));
        } else {
          static_assert(std::is_same_v<T, LogNormalA>);
          // (1/a) * lognormal(mu, sigma) is proportional to
          // lognormal(mu - sigma^2, sigma); truncation commutes with the tilt.
          return EnvSpec::lognormal(v.mu - v.sigma * v.sigma, v.sigma, v.b_rule);
        }
      },
      env.variant());
}

std::string env_to_json(const EnvSpec& env) {
  nlohmann::json j;
  std::visit(
      [&j](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ConstantPair>) {
          j = {{"variant", "constant"}, {"A", v.A}, {"B", v.B}};
        } else if constexpr (std::is_same_v<T, DiscreteTable>) {
          nlohmann::json atoms = nlohmann::json::array();
          for (const TableAtom& a : v.atoms) {
            atoms.push_back({{"A", a.A}, {"B", a.B}, {"w", a.w}});
          }
          j = {{"variant", "table"}, {"atoms", atoms}};
        } else if constexpr (std::is_same_v<T, DegenerateLine>) {
          nlohmann::json atoms = nlohmann::json::array();
          for (const AtomA& a : v.law_of_a) {
            atoms.push_back({{"A", a.A}, {"w", a.w}});
          }
          j = {{"variant", "degenerate_line"},
               {"x", v.x},
               {"sign", v.sign == LineSign::plus ? "plus" : "minus"},
               {"law_of_A", atoms}};
        } else {
          static_assert(std::is_same_v<T, LogNormalA>);
          nlohmann::json rule;
          if (const auto* c = std::get_if<BRuleConst>(&v.b_rule)) {
            rule = {{"type", "constant"}, {"B", c->B}};
          } else {
            rule = {{"type", "line"}, {"x", std::get<BRuleLine>(v.b_rule).x}};
          }
          j = {{"variant", "lognormal_a"},
               {"mu", v.mu},
               {"sigma", v.sigma},
               {"b_rule", rule}};
        }
      },
      env.variant());
  return j.dump();
}

EnvSpec env_from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const std::string variant = j.at("variant").get<std::string>();
  if (variant == "constant") {
    return EnvSpec::constant(j.at("A").get<double>(), j.at("B").get<double>());
  }
  if (variant == "table") {
    std::vector<TableAtom> atoms;
    for (const auto& a : j.at("atoms")) {
      atoms.push_back({a.at("A").get<double>(), a.at("B").get<double>(),
                       a.at("w").get<double>()});
    }
    return EnvSpec::table(std::move(atoms));
  }
  if (variant == "degenerate_line") {
    std::vector<AtomA> atoms;
    for (const auto& a : j.at("law_of_A")) {
      atoms.push_back({a.at("A").get<double>(), a.at("w").get<double>()});
    }
    const std::string sign = j.at("sign").get<std::string>();
    if (sign != "plus" && sign != "minus") {
      throw std::domain_error("degenerate_line: sign must be plus or minus");
    }
    return EnvSpec::degenerate_line(
        j.at("x").get<double>(),
        sign == "plus" ? LineSign::plus : LineSign::minus, std::move(atoms));
  }
  if (variant == "lognormal_a") {
    const auto& rule = j.at("b_rule");
    const std::string type = rule.at("type").get<std::string>();
    BRule b_rule;
    if (type == "constant") {
      b_rule = BRuleConst{rule.at("B").get<double>()};
    } else if (type == "line") {
      b_rule = BRuleLine{rule.at("x").get<double>()};
    } else {
      throw std::domain_error("lognormal_a: unknown b_rule type");
    }
    return EnvSpec::lognormal(j.at("mu").get<double>(),
                              j.at("sigma").get<double>(), b_rule);
  }
  throw std::domain_error("EnvSpec: unknown variant '" + variant + "'");
}

}  // namespace lfgw
