#include "lfgw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lfgw {

EmpiricalLaw::EmpiricalLaw(std::size_t cap) : counts_(cap, 0) {
  if (cap == 0) throw std::domain_error("EmpiricalLaw: cap must be positive");
}

void EmpiricalLaw::add(std::uint64_t value) {
  if (value < counts_.size()) {
    ++counts_[value];
  } else {
    ++tail_;
  }
  ++total_;
}

double EmpiricalLaw::prob(std::uint64_t k) const {
  if (total_ == 0) return 0.0;
  if (k >= counts_.size()) return 0.0;
  return static_cast<double>(counts_[k]) / static_cast<double>(total_);
}

double EmpiricalLaw::tail_mass() const {
  return total_ == 0 ? 0.0
                     : static_cast<double>(tail_) / static_cast<double>(total_);
}

void KahanSum::add(double x) {
  const double y = x - c_;
  const double t = sum_ + y;
  c_ = (t - sum_) - y;
  sum_ = t;
}

MeanSd mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) throw std::domain_error("mean_sd: empty sample");
  KahanSum s;
  for (double x : xs) s.add(x);
  const double n = static_cast<double>(xs.size());
  const double mean = s.value() / n;
  KahanSum s2;
  for (double x : xs) s2.add((x - mean) * (x - mean));
  const double var = xs.size() > 1 ? s2.value() / (n - 1.0) : 0.0;
  const double sd = std::sqrt(var);
  return MeanSd{mean, sd, sd / std::sqrt(n), xs.size()};
}

TvResult tv_distance(const EmpiricalLaw& emp,
                     const std::function<double(std::uint64_t)>& pmf,
                     double tail_mass_cut) {
  KahanSum half_abs;
  double exact_cum = 0.0;
  for (std::uint64_t k = 0; k < emp.cap(); ++k) {
    const double q = pmf(k);
    exact_cum += q;
    half_abs.add(std::abs(emp.prob(k) - q));
  }
  const double slack =
      std::max(tail_mass_cut, 1.0 - exact_cum) + emp.tail_mass();
  return TvResult{0.5 * half_abs.value(), slack};
}

TvResult tv_distance(const EmpiricalLaw& e1, const EmpiricalLaw& e2) {
  const std::size_t cap = std::max(e1.cap(), e2.cap());
  KahanSum half_abs;
  for (std::uint64_t k = 0; k < cap; ++k) {
    half_abs.add(std::abs(e1.prob(k) - e2.prob(k)));
  }
  return TvResult{0.5 * half_abs.value(), e1.tail_mass() + e2.tail_mass()};
}

namespace {

double ks_threshold(double alpha, double n_eff) {
  return std::sqrt(-0.5 * std::log(alpha / 2.0)) / std::sqrt(n_eff);
}

}  // namespace

KsResult ks_discrete(const EmpiricalLaw& emp,
                     const std::function<double(std::uint64_t)>& cdf,
                     double alpha) {
  if (emp.total() == 0) throw std::domain_error("ks_discrete: empty law");
  const double n = static_cast<double>(emp.total());
  double ecdf = 0.0;
  double stat = 0.0;
  for (std::uint64_t k = 0; k < emp.cap(); ++k) {
    ecdf += emp.prob(k);
    stat = std::max(stat, std::abs(ecdf - cdf(k)));
    if (ecdf >= 1.0 - 1e-15 && cdf(k) >= 1.0 - 1e-15) break;
  }
  const double thr = ks_threshold(alpha, n);
  return KsResult{stat, thr, stat <= thr};
}

KsResult ks_continuous(std::vector<double> xs,
                       const std::function<double(double)>& cdf,
                       double alpha) {
  if (xs.empty()) throw std::domain_error("ks_continuous: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double stat = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    stat = std::max(stat, std::abs(f - static_cast<double>(i) / n));
    stat = std::max(stat, std::abs(static_cast<double>(i + 1) / n - f));
  }
  const double thr = ks_threshold(alpha, n);
  return KsResult{stat, thr, stat <= thr};
}

KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys,
                       double alpha) {
  if (xs.empty() || ys.empty()) {
    throw std::domain_error("ks_two_sample: empty sample");
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  const double nx = static_cast<double>(xs.size());
  const double ny = static_cast<double>(ys.size());
  double stat = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < xs.size() && j < ys.size()) {
    const double v = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= v) ++i;
    while (j < ys.size() && ys[j] <= v) ++j;
    stat = std::max(stat, std::abs(static_cast<double>(i) / nx -
                                   static_cast<double>(j) / ny));
  }
  const double n_eff = nx * ny / (nx + ny);
  const double thr = ks_threshold(alpha, n_eff);
  return KsResult{stat, thr, stat <= thr};
}

}  // namespace lfgw
