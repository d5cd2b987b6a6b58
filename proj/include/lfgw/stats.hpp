#ifndef LFGW_STATS_HPP
#define LFGW_STATS_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace lfgw {

// Empirical law on {0, 1, ..., cap-1} plus a lumped tail.
class EmpiricalLaw {
 public:
  explicit EmpiricalLaw(std::size_t cap = 4096);

  void add(std::uint64_t value);
  std::uint64_t total() const { return total_; }
  std::uint64_t tail_count() const { return tail_; }
  std::size_t cap() const { return counts_.size(); }
  double prob(std::uint64_t k) const;      // 0 past the cap
  double tail_mass() const;
  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::uint64_t tail_ = 0;
  std::uint64_t total_ = 0;
};

// Order-stable compensated accumulator.
class KahanSum {
 public:
  void add(double x);
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

struct MeanSd {
  double mean;
  double sd;       // sample standard deviation
  double stderr_;  // sd / sqrt(n)
  std::uint64_t n;
};

MeanSd mean_sd(const std::vector<double>& xs);

// 1/2 sum |p - q| over the common truncated support; slack is the mass either
// law carries past the truncation (reported, not folded into the distance).
struct TvResult {
  double distance;
  double slack;
};

TvResult tv_distance(const EmpiricalLaw& emp,
                     const std::function<double(std::uint64_t)>& pmf,
                     double tail_mass_cut = 1e-12);
TvResult tv_distance(const EmpiricalLaw& e1, const EmpiricalLaw& e2);

struct KsResult {
  double statistic;
  double threshold;  // sqrt(-ln(alpha/2) / 2) scaled by the effective n
  bool pass;
};

// One-sample KS of an empirical integer law against an exact cdf.
KsResult ks_discrete(const EmpiricalLaw& emp,
                     const std::function<double(std::uint64_t)>& cdf,
                     double alpha);

// One-sample KS of real-valued data against a continuous cdf.
KsResult ks_continuous(std::vector<double> xs,
                       const std::function<double(double)>& cdf, double alpha);

// Two-sample KS on real-valued data.
KsResult ks_two_sample(std::vector<double> xs, std::vector<double> ys,
                       double alpha);

}  // namespace lfgw

#endif
