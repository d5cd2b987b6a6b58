#ifndef LFGW_CLASSIFY_HPP
#define LFGW_CLASSIFY_HPP

#include <optional>
#include <string>

#include "lfgw/config.hpp"
#include "lfgw/env.hpp"

namespace lfgw {

enum class GmSide { minus, plus };

struct GmIntegral {
  double value;   // +inf when the integral diverges (or J vanishes)
  double stderr_; // 0 for exact evaluation
  bool exact;
};

// The Goldie-Maller convergence integrals:
//   I- = E[ log B / J-(log B) ; B > 1 ],  J-(y) = E[min(y, log- A)]
//   I+ = same with B/A and J+(y) = E[min(y, log+ A)].
// Exact for finite-support specs; Monte Carlo (with a divergence cap) for the
// lognormal family.
GmIntegral gm_integral(const EnvSpec& env, GmSide side,
                       std::uint64_t seed = 0,
                       const Tolerances& tol = default_tol());

enum class TrichotomyLabel { C1, C2, C3 };
enum class TrichotomySubCase { C1_1, C1_2, C2_1, C2_2, C3_1, C3_2, C3_3, C3_4 };
enum class Criticality { supercritical, subcritical, critical, strongly_critical };

struct TrichotomyEvidence {
  std::optional<double> drift;      // E log A
  std::optional<GmIntegral> i_minus;
  std::optional<GmIntegral> i_plus;
  std::optional<double> line_x;     // fitted degenerate-line parameter
  std::string note;
};

struct Trichotomy {
  TrichotomyLabel label;
  TrichotomySubCase sub_case;
  Criticality criticality;
  TrichotomyEvidence evidence;
};

std::string to_string(TrichotomySubCase sub_case);
std::string to_string(Criticality criticality);

// Which of R_inf, R_inf^(-1) is finite, and the induced criticality regime.
// Throws Unclassifiable when Monte Carlo evidence is inconclusive.
Trichotomy classify(const EnvSpec& env, std::uint64_t seed = 0,
                    const Tolerances& tol = default_tol());

// Degenerate-line detection: the fitted x with |B - x(1-A)| (resp.
// |B - x(A-1)|) <= tol.line_fit * (1 + |x|) across the support.
std::optional<double> fit_line(const EnvSpec& env, LineSign sign,
                               const Tolerances& tol = default_tol());

}  // namespace lfgw

#endif
