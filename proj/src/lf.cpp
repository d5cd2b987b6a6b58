#include "lfgw/lf.hpp"

#include <cmath>
#include <stdexcept>

namespace lfgw {

GeomPlus::GeomPlus(double p) : p_(p) {
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("GeomPlus: p must lie in (0, 1]");
  }
}

double GeomPlus::pmf(std::uint64_t k) const {
  if (k == 0) return 0.0;
  if (p_ == 1.0) return k == 1 ? 1.0 : 0.0;
  return p_ * std::exp(static_cast<double>(k - 1) * std::log1p(-p_));
}

double GeomPlus::cdf(std::uint64_t k) const {
  if (k == 0) return 0.0;
  if (p_ == 1.0) return 1.0;
  // 1 - (1-p)^k
  return -std::expm1(static_cast<double>(k) * std::log1p(-p_));
}

std::uint64_t GeomPlus::sample(RngStream& rng) const {
  const double u = rng.next_double();
  if (p_ == 1.0) return 1;
  const double k = std::floor(std::log(u) / std::log1p(-p_));
  if (!(k < 0x1p62)) return static_cast<std::uint64_t>(1) << 62;
  return 1 + static_cast<std::uint64_t>(k);
}

LinearFractional::LinearFractional(double a, double b) {
  if (!(a > 0.0) || !(b >= 0.0) || !(a + b >= 1.0)) {
    throw std::domain_error("LinearFractional: need a > 0, b >= 0, a + b >= 1");
  }
  log_a_ = std::log(a);
  log_b_ = b == 0.0 ? neg_inf : std::log(b);
}

LinearFractional LinearFractional::from_logs(double log_a, double log_b) {
  LinearFractional lf;
  lf.log_a_ = log_a;
  lf.log_b_ = log_b;
  const double lab = log_sum_exp(log_a, log_b);
  if (lab < 0.0) {
    // Exactly-critical compositions land on a + b = 1; absorb roundoff by
    // renormalizing, reject anything genuinely below the boundary.
    if (lab < -1e-9) {
      throw std::domain_error("LinearFractional: a + b >= 1 violated");
    }
    lf.log_a_ -= lab;
    if (lf.log_b_ != neg_inf) lf.log_b_ -= lab;
  }
  return lf;
}

LFMixture to_mixture(const LinearFractional& lf) {
  const double lab = lf.log_ab();
  const double w0 = -std::expm1(-lab);            // (a+b-1)/(a+b)
  const double p = std::exp(lf.log_a() - lab);    // a/(a+b)
  return LFMixture{w0, GeomPlus(p)};
}

LinearFractional from_params(double p0, double p) {
  if (!(p0 >= 0.0) || p0 >= 1.0) {
    throw std::domain_error("from_params: p0 must lie in [0, 1)");
  }
  if (!(p > 0.0) || p > 1.0) {
    throw std::domain_error("from_params: p must lie in (0, 1]");
  }
  return LinearFractional(p / (1.0 - p0), (1.0 - p) / (1.0 - p0));
}

double gf_eval(const LinearFractional& lf, double s) {
  if (!(s >= 0.0) || s > 1.0) {
    throw std::domain_error("gf_eval: s must lie in [0, 1]");
  }
  if (s == 1.0) return 1.0;
  // f(s) = 1 - 1/(a/(1-s) + b), with the denominator kept in log space.
  const double log_den = log_sum_exp(lf.log_a() - std::log1p(-s), lf.log_b());
  return -std::expm1(-log_den);
}

double pmf(const LinearFractional& lf, std::uint64_t k) {
  const double lab = lf.log_ab();
  if (k == 0) return -std::expm1(-lab);
  const double p = std::exp(lf.log_a() - lab);
  // (1 - w0) * Geom_+(p) pmf, with 1 - w0 = 1/(a+b)
  if (p == 1.0) return k == 1 ? std::exp(-lab) : 0.0;
  return std::exp(-lab) * p *
         std::exp(static_cast<double>(k - 1) * std::log1p(-p));
}

LFMoments moments(const LinearFractional& lf) {
  LFMoments m;
  m.mean = std::exp(-lf.log_a());
  m.second_factorial = 2.0 * std::exp(lf.log_b() - 2.0 * lf.log_a());
  if (lf.log_a() < 0.0) {
    // supercritical: q = (a + b - 1)/b
    m.extinction_prob =
        std::exp(log_diff_exp(lf.log_ab(), 0.0) - lf.log_b());
  } else if (lf.log_b() == neg_inf && lf.log_a() == 0.0) {
    m.extinction_prob = 0.0;  // delta_1 never dies
  } else {
    m.extinction_prob = 1.0;  // critical/subcritical extension
  }
  return m;
}

LinearFractional iterate_fixed(const LinearFractional& lf, std::uint64_t n) {
  if (n == 0) {
    throw std::domain_error("iterate_fixed: n must be >= 1");
  }
  const double la = lf.log_a();
  const double nd = static_cast<double>(n);
  // log sum_{k=0}^{n-1} a^k, via the geometric series in log space
  double log_series;
  if (la == 0.0) {
    log_series = std::log(nd);
  } else if (la > 0.0) {
    log_series = log_diff_exp(nd * la, 0.0) - log_diff_exp(la, 0.0);
  } else {
    log_series = log_diff_exp(0.0, nd * la) - log_diff_exp(0.0, la);
  }
  return LinearFractional::from_logs(nd * la, lf.log_b() + log_series);
}

GeomPlus geom_conjugate(const GeomPlus& g, double gamma) {
  if (!(gamma > 0.0) || gamma > 1.0) {
    throw std::domain_error("geom_conjugate: gamma must lie in (0, 1]");
  }
  return GeomPlus(1.0 - (1.0 - g.p()) * gamma);
}

std::uint64_t sample(const LinearFractional& lf, RngStream& rng) {
  const LFMixture mix = to_mixture(lf);
  const double u = rng.next_double();
  const std::uint64_t k = mix.geom.sample(rng);
  return u < mix.w0 ? 0 : k;
}

}  // namespace lfgw
