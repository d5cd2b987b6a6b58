#include "lfgw/samplers.hpp"

#include <cmath>
#include <stdexcept>

namespace lfgw {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Tail of the Stirling series: log k! - (k + 1/2) log k + k - log sqrt(2 pi).
double stirling_tail(double k) {
  static const double tab[] = {
      0.08106146679532726, 0.04134069595540929, 0.02767792568499834,
      0.02079067210376509, 0.01664469118982119, 0.01387612882307075,
      0.01189670994589177, 0.01041126526197209, 0.00925546218271273,
      0.00833056343336287};
  if (k < 10.0) return tab[static_cast<int>(k)];
  const double kp1 = k + 1.0;
  const double kp1sq = kp1 * kp1;
  return (1.0 / 12.0 - (1.0 / 360.0 - 1.0 / (1260.0 * kp1sq)) / kp1sq) / kp1;
}

std::uint64_t poisson_inversion(double lambda, RngStream& rng) {
  const double p0 = std::exp(-lambda);
  double u = rng.next_double();
  double p = p0;
  std::uint64_t k = 0;
  while (u > p) {
    u -= p;
    ++k;
    p *= lambda / static_cast<double>(k);
    if (k > 200) {  // u in the far tail; numerically exhausted
      return k;
    }
  }
  return k;
}

// Hormann's PTRS transformed rejection, lambda >= 10.
std::uint64_t poisson_ptrs(double lambda, RngStream& rng) {
  const double log_lambda = std::log(lambda);
  const double b = 0.931 + 2.53 * std::sqrt(lambda);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    const double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * log_lambda - lambda - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

std::uint64_t binomial_inversion(std::uint64_t n, double p, RngStream& rng) {
  const double q = 1.0 - p;
  const double s = p / q;
  const double nd = static_cast<double>(n);
  double f = std::pow(q, nd);
  double u = rng.next_double();
  std::uint64_t k = 0;
  while (u > f) {
    u -= f;
    ++k;
    if (k > n) return n;
    f *= s * (nd - static_cast<double>(k - 1)) / static_cast<double>(k);
  }
  return k;
}

// Hormann's BTRS transformed rejection, n p >= 10 with p <= 1/2.
std::uint64_t binomial_btrs(std::uint64_t n, double p, RngStream& rng) {
  const double nd = static_cast<double>(n);
  const double q = 1.0 - p;
  const double spq = std::sqrt(nd * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double v_r = 0.92 - 4.2 / b;
  const double r = p / q;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((nd + 1.0) * p);
  for (;;) {
    const double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + c);
    if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || kf > nd) continue;
    v = std::log(v * alpha / (a / (us * us) + b));
    const double bound =
        (m + 0.5) * std::log((m + 1.0) / (r * (nd - m + 1.0))) +
        (nd + 1.0) * std::log((nd - m + 1.0) / (nd - kf + 1.0)) +
        (kf + 0.5) * std::log(r * (nd - kf + 1.0) / (kf + 1.0)) +
        stirling_tail(m) + stirling_tail(nd - m) - stirling_tail(kf) -
        stirling_tail(nd - kf);
    if (v <= bound) return static_cast<std::uint64_t>(kf);
  }
}

}  // namespace

double sample_std_normal(RngStream& rng) {
  const double u1 = rng.next_double();
  const double u2 = rng.next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::uint64_t sample_geometric_failures(double p, RngStream& rng) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::domain_error("sample_geometric_failures: p must be in (0, 1]");
  }
  if (p == 1.0) {
    rng.next_double();
    return 0;
  }
  const double g = std::floor(std::log(rng.next_double()) / std::log1p(-p));
  return g > 9.0e18 ? static_cast<std::uint64_t>(9.0e18)
                    : static_cast<std::uint64_t>(g);
}

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0)) {
    throw std::domain_error("sample_gamma: shape must be > 0");
  }
  if (shape < 1.0) {
    const double boost = sample_gamma(shape + 1.0, rng);
    return boost * std::pow(rng.next_double(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = sample_std_normal(rng);
    const double t = 1.0 + c * x;
    if (t <= 0.0) continue;
    const double v = t * t * t;
    const double u = rng.next_double();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) {
      return d * v;
    }
  }
}

std::uint64_t sample_poisson(double lambda, RngStream& rng) {
  if (!(lambda >= 0.0)) {
    throw std::domain_error("sample_poisson: lambda must be >= 0");
  }
  if (lambda == 0.0) return 0;
  return lambda < 10.0 ? poisson_inversion(lambda, rng)
                       : poisson_ptrs(lambda, rng);
}

std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng) {
  if (!(p >= 0.0) || !(p <= 1.0)) {
    throw std::domain_error("sample_binomial: p must be in [0, 1]");
  }
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  const bool flip = p > 0.5;
  const double pl = flip ? 1.0 - p : p;
  const double mean = static_cast<double>(n) * pl;
  const std::uint64_t k =
      mean < 10.0 ? binomial_inversion(n, pl, rng) : binomial_btrs(n, pl, rng);
  return flip ? n - k : k;
}

std::uint64_t sample_negbin_failures(std::uint64_t m, double p,
                                     RngStream& rng) {
  if (!(p > 0.0) || !(p <= 1.0)) {
    throw std::domain_error("sample_negbin_failures: p must be in (0, 1]");
  }
  if (m == 0 || p == 1.0) return 0;
  if (m <= 32) {
    std::uint64_t acc = 0;
    for (std::uint64_t i = 0; i < m; ++i) {
      acc += sample_geometric_failures(p, rng);
    }
    return acc;
  }
  const double lambda =
      sample_gamma(static_cast<double>(m), rng) * (1.0 - p) / p;
  return sample_poisson(lambda, rng);
}

}  // namespace lfgw
