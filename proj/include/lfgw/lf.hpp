#ifndef LFGW_LF_HPP
#define LFGW_LF_HPP

#include <cstdint>

#include "lfgw/logspace.hpp"
#include "lfgw/rng.hpp"

namespace lfgw {

// Geometric law on {1, 2, ...} with pmf p (1-p)^{k-1}.
class GeomPlus {
 public:
  explicit GeomPlus(double p);

  double p() const { return p_; }
  double mean() const { return 1.0 / p_; }
  double pmf(std::uint64_t k) const;
  double cdf(std::uint64_t k) const;  // P(X <= k)
  std::uint64_t sample(RngStream& rng) const;

 private:
  double p_;
};

// LF(a, b): the law on {0, 1, 2, ...} whose g.f. f satisfies
// 1/(1 - f(s)) = a/(1 - s) + b. Parameters are carried in log space so that
// iterated laws with astronomically large a (or b) stay representable.
// b = 0 is admitted as the boundary case LF(1, 0) = delta_1, the n = 0 law.
class LinearFractional {
 public:
  LinearFractional(double a, double b);
  static LinearFractional from_logs(double log_a, double log_b);

  double a() const { return std::exp(log_a_); }
  double b() const { return log_b_ == neg_inf ? 0.0 : std::exp(log_b_); }
  double log_a() const { return log_a_; }
  double log_b() const { return log_b_; }
  // log(a + b)
  double log_ab() const { return log_sum_exp(log_a_, log_b_); }

 private:
  LinearFractional() = default;
  double log_a_ = 0.0;
  double log_b_ = neg_inf;
};

// Mixture form: mass w0 at zero, mass (1 - w0) spread as a Geom_+ law.
struct LFMixture {
  double w0;
  GeomPlus geom;

  double pmf(std::uint64_t k) const {
    return k == 0 ? w0 : (1.0 - w0) * geom.pmf(k);
  }
};

struct LFMoments {
  double mean;              // 1/a
  double second_factorial;  // f''(1) = 2 b / a^2
  double extinction_prob;   // (a+b-1)/b if a < 1; 1 if a >= 1 (0 for delta_1)
};

LFMixture to_mixture(const LinearFractional& lf);
LinearFractional from_params(double p0, double p);
double gf_eval(const LinearFractional& lf, double s);
double pmf(const LinearFractional& lf, std::uint64_t k);
LFMoments moments(const LinearFractional& lf);
LinearFractional iterate_fixed(const LinearFractional& lf, std::uint64_t n);
GeomPlus geom_conjugate(const GeomPlus& g, double gamma);

// Two uniforms per draw: one for the zero/positive split, one for the
// inverse-transform geometric part (consumed even when the draw is zero).
std::uint64_t sample(const LinearFractional& lf, RngStream& rng);

}  // namespace lfgw

#endif
