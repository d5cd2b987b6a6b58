#ifndef LFGW_SAMPLERS_HPP
#define LFGW_SAMPLERS_HPP

#include <cstdint>

#include "lfgw/rng.hpp"

namespace lfgw {

double sample_std_normal(RngStream& rng);

// Failures before the first success, success probability p in (0, 1].
std::uint64_t sample_geometric_failures(double p, RngStream& rng);

// Gamma(shape, 1) by Marsaglia-Tsang squeeze (with the shape < 1 boost).
double sample_gamma(double shape, RngStream& rng);

// Inversion below lambda = 10, transformed rejection above.
std::uint64_t sample_poisson(double lambda, RngStream& rng);

// Inversion when n * min(p, 1-p) is small, transformed rejection otherwise.
std::uint64_t sample_binomial(std::uint64_t n, double p, RngStream& rng);

// Failures in m negative-binomial trials with success probability p: exact
// geometric convolution for small m, gamma-Poisson mixture for large m.
std::uint64_t sample_negbin_failures(std::uint64_t m, double p, RngStream& rng);

}  // namespace lfgw

#endif
