#include "lfgw/affine.hpp"

#include <cmath>
#include <stdexcept>

namespace lfgw {

EnvPair::EnvPair(double a, double b) : A(a), B(b) {
  if (!(a > 0.0) || !(b > 0.0) || !(a + b >= 1.0)) {
    throw std::domain_error("EnvPair: need A > 0, B > 0, A + B >= 1");
  }
}

PathState step(const PathState& state, const EnvPair& pair) {
  PathState next;
  next.n = state.n + 1;
  const double log_b = std::log(pair.B);
  next.log_r = log_sum_exp(state.log_r, state.log_pi + log_b);
  next.log_pi = state.log_pi + std::log(pair.A);
  next.log_rdual = log_sum_exp(state.log_rdual, log_b - next.log_pi);
  return next;
}

double backward_eval(const PathState& state, double x) {
  if (!(x >= 0.0)) {
    throw std::domain_error("backward_eval: x must be >= 0");
  }
  if (x == 0.0) return state.r();
  return std::exp(log_sum_exp(state.log_pi + std::log(x), state.log_r));
}

PathState fold_path(std::span<const EnvPair> pairs) {
  PathState s;
  for (const EnvPair& p : pairs) s = step(s, p);
  return s;
}

PathState dual_path(std::span<const EnvPair> pairs) {
  PathState s;
  for (auto it = pairs.rbegin(); it != pairs.rend(); ++it) s = step(s, *it);
  return s;
}

}  // namespace lfgw
