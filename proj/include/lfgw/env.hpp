#ifndef LFGW_ENV_HPP
#define LFGW_ENV_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lfgw/affine.hpp"
#include "lfgw/config.hpp"
#include "lfgw/rng.hpp"

namespace lfgw {

struct ConstantPair {
  double A;
  double B;
};

struct TableAtom {
  double A;
  double B;
  double w;
};

struct DiscreteTable {
  std::vector<TableAtom> atoms;
};

enum class LineSign { plus, minus };  // B = x(1-A) resp. B = x(A-1)

struct AtomA {
  double A;
  double w;
};

// Built-in coupling rules for the parametric family: constant B, or the
// degenerate line B = x(1-A) with A truncated to (0,1). Anything richer is
// expected to come in as a quantized DiscreteTable.
struct BRuleConst {
  double B;
};
struct BRuleLine {
  double x;
};
using BRule = std::variant<BRuleConst, BRuleLine>;

// log A ~ Normal(mu, sigma^2); with the line rule the law of A is the
// truncation of that lognormal to (0, 1).
struct LogNormalA {
  double mu;
  double sigma;
  BRule b_rule;
};

struct DegenerateLine {
  double x;
  LineSign sign;
  std::vector<AtomA> law_of_a;
};

// The distribution of the environment pair (A, B).
class EnvSpec {
 public:
  using Variant =
      std::variant<ConstantPair, DiscreteTable, LogNormalA, DegenerateLine>;

  static EnvSpec constant(double A, double B);
  static EnvSpec table(std::vector<TableAtom> atoms);
  static EnvSpec lognormal(double mu, double sigma, BRule b_rule);
  static EnvSpec degenerate_line(double x, LineSign sign,
                                 std::vector<AtomA> law_of_a);

  const Variant& variant() const { return v_; }

  // All log-moments of the built-in variants have closed forms; "exact" is
  // false only where Monte Carlo is genuinely needed (the Goldie-Maller
  // integrals of a lognormal environment).
  bool exact() const {
    return !std::holds_alternative<LogNormalA>(v_);
  }

  // Finite-support view, when one exists.
  std::optional<DiscreteTable> as_table() const;

 private:
  explicit EnvSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

EnvPair sample_pair(const EnvSpec& env, RngStream& rng);

// Exact/analytic moment helpers.
double e_log_a(const EnvSpec& env);
double var_log_a(const EnvSpec& env);
double e_a(const EnvSpec& env);
double e_b(const EnvSpec& env);
double e_log_b(const EnvSpec& env);
bool a_identically_one(const EnvSpec& env);

// Cumulant g.f. of log(1/A): psi(theta) = log E (1/A)^theta, theta in [0,1].
double psi(const EnvSpec& env, double theta);
double psi_prime(const EnvSpec& env, double theta);
// kappa = psi(1) = log E(1/A)
double kappa(const EnvSpec& env);

struct SubcriticalRegime {
  enum class Label { strongly, intermediately, weakly, not_subcritical };
  Label label;
  double psi0_prime;
  double psi1_prime;
  std::optional<double> kappa;
};

std::string to_string(SubcriticalRegime::Label label);

SubcriticalRegime subregime(const EnvSpec& env,
                            const Tolerances& tol = default_tol());

// Exponential tilt to the measure with single-step density (1/A) e^{-kappa};
// the environment stays i.i.d. and the support of (A, B) is preserved.
EnvSpec tilt(const EnvSpec& env);

// JSON document form: {"variant": "...", ...}. Round-trips bit-stably for
// finite-support specs.
std::string env_to_json(const EnvSpec& env);
EnvSpec env_from_json(const std::string& text);

}  // namespace lfgw

#endif
