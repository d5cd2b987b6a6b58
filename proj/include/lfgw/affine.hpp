#ifndef LFGW_AFFINE_HPP
#define LFGW_AFFINE_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "lfgw/logspace.hpp"

namespace lfgw {

// One environment realization (A, B), read as the affine map x -> A x + B.
struct EnvPair {
  double A;
  double B;

  EnvPair(double a, double b);
};

// Running quantities along an environment path:
//   log Pi_n = sum log A_k,
//   R_n      = sum Pi_{k-1} B_k       (backward-iteration intercept),
//   R_n^(-1) = sum Pi_k^{-1} B_k      (dual partial sum),
//   S_n      = -log Pi_n.
// R and its dual are carried in log space; both are nondecreasing in n.
struct PathState {
  std::uint64_t n = 0;
  double log_pi = 0.0;
  double log_r = neg_inf;
  double log_rdual = neg_inf;

  double pi() const { return std::exp(log_pi); }
  double r() const { return std::exp(log_r); }
  double rdual() const { return std::exp(log_rdual); }
  double s() const { return -log_pi; }
  // M_n = R_n / Pi_n
  double m() const { return std::exp(log_r - log_pi); }
};

PathState step(const PathState& state, const EnvPair& pair);

// g_{1:n}(x) = Pi_n x + R_n
double backward_eval(const PathState& state, double x);

PathState fold_path(std::span<const EnvPair> pairs);

// State of the reversed-order path e_{n:1}.
PathState dual_path(std::span<const EnvPair> pairs);

}  // namespace lfgw

#endif
