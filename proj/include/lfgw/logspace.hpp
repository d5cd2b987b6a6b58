#ifndef LFGW_LOGSPACE_HPP
#define LFGW_LOGSPACE_HPP

#include <algorithm>
#include <cmath>
#include <limits>

namespace lfgw {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

// log(e^x + e^y) without overflow.
inline double log_sum_exp(double x, double y) {
  if (x == neg_inf) return y;
  if (y == neg_inf) return x;
  const double m = std::max(x, y);
  if (m == pos_inf) return pos_inf;
  return m + std::log1p(std::exp(std::min(x, y) - m));
}

// log(e^x - e^y), requires x >= y.
inline double log_diff_exp(double x, double y) {
  if (y == neg_inf) return x;
  if (x == y) return neg_inf;
  return x + std::log1p(-std::exp(y - x));
}

}  // namespace lfgw

#endif
