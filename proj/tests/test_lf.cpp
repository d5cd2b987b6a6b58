#include <cmath>

#include "doctest.h"
#include "lfgw/lf.hpp"
#include "lfgw/rng.hpp"
#include "oracles.hpp"

using namespace lfgw;

TEST_CASE("GeomPlus basics") {
  GeomPlus g(0.25);
  CHECK(g.pmf(0) == 0.0);
  CHECK(g.pmf(1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(g.pmf(3) == doctest::Approx(0.25 * 0.75 * 0.75).epsilon(1e-14));
  CHECK(g.cdf(2) == doctest::Approx(1.0 - 0.75 * 0.75).epsilon(1e-14));
  CHECK(g.mean() == doctest::Approx(4.0));
  CHECK_THROWS_AS(GeomPlus(0.0), std::domain_error);
  CHECK_THROWS_AS(GeomPlus(1.5), std::domain_error);
  GeomPlus unit(1.0);
  CHECK(unit.pmf(1) == 1.0);
  CHECK(unit.cdf(1) == 1.0);
}

TEST_CASE("mixture form and zero mass") {
  LinearFractional lf(2.0, 1.0);
  const LFMixture mix = to_mixture(lf);
  CHECK(mix.w0 == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(mix.geom.p() == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(pmf(lf, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  // pmf sums to 1
  double tot = 0.0;
  for (std::uint64_t k = 0; k <= 200; ++k) tot += pmf(lf, k);
  CHECK(tot == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("parameter round trips") {
  const LinearFractional lf = from_params(0.4, 0.3);
  const LFMixture mix = to_mixture(lf);
  CHECK(mix.w0 == doctest::Approx(0.4).epsilon(1e-13));
  CHECK(mix.geom.p() == doctest::Approx(0.3).epsilon(1e-13));
}

TEST_CASE("moments") {
  SUBCASE("subcritical mean") {
    const LFMoments m = moments(LinearFractional(2.0, 1.0));
    CHECK(m.mean == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.second_factorial == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(m.extinction_prob == 1.0);
  }
  SUBCASE("supercritical extinction") {
    const LFMoments m = moments(LinearFractional(0.5, 1.0));
    CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(m.extinction_prob == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("point mass at one") {
    const LFMoments m = moments(LinearFractional(1.0, 0.0));
    CHECK(m.mean == 1.0);
    CHECK(m.extinction_prob == 0.0);
  }
}

TEST_CASE("gf_eval matches the series") {
  const LinearFractional lf(0.8, 0.6);
  for (double s : {0.0, 0.3, 0.7, 0.95}) {
    double series = 0.0;
    double sk = 1.0;
    for (std::uint64_t k = 0; k <= 3000; ++k) {
      series += pmf(lf, k) * sk;
      sk *= s;
    }
    CHECK(gf_eval(lf, s) == doctest::Approx(series).epsilon(1e-12));
  }
  CHECK(gf_eval(lf, 1.0) == 1.0);
}

TEST_CASE("fixed-environment iteration") {
  // three steps of (2,1): a = 8, b = 1 + 2 + 4 = 7
  const LinearFractional it = iterate_fixed(LinearFractional(2.0, 1.0), 3);
  CHECK(it.a() == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(it.b() == doctest::Approx(7.0).epsilon(1e-13));
  // oracle: scalar composition of the g.f. three times
  const std::vector<EnvPair> path(3, EnvPair(2.0, 1.0));
  for (double s : {0.0, 0.25, 0.5, 0.9}) {
    const double expect = oracle::compose_gf(path, oracle::cd(s, 0.0)).real();
    CHECK(gf_eval(it, s) == doctest::Approx(expect).epsilon(1e-12));
  }
  // critical a = 1 uses the n-term series
  const LinearFractional crit = iterate_fixed(LinearFractional(1.0, 1.0), 5);
  CHECK(crit.a() == doctest::Approx(1.0));
  CHECK(crit.b() == doctest::Approx(5.0).epsilon(1e-13));
  CHECK_THROWS_AS(iterate_fixed(LinearFractional(2.0, 1.0), 0),
                  std::domain_error);
}

TEST_CASE("geometric conjugation") {
  const GeomPlus g = geom_conjugate(GeomPlus(0.5), 0.8);
  CHECK(g.p() == doctest::Approx(1.0 - 0.5 * 0.8).epsilon(1e-14));
  CHECK_THROWS_AS(geom_conjugate(GeomPlus(0.5), 0.0), std::domain_error);
}

TEST_CASE("sampling matches pmf") {
  const LinearFractional lf(0.8, 0.6);
  RngStream rng = make_stream(11, 0, StreamPurpose::offspring);
  const std::uint64_t reps = 200000;
  std::vector<std::uint64_t> counts(64, 0);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < reps; ++i) {
    const std::uint64_t z = sample(lf, rng);
    if (z < counts.size()) ++counts[z];
    sum += static_cast<double>(z);
  }
  const double mean = sum / static_cast<double>(reps);
  const LFMoments mm = moments(lf);
  const double var =
      mm.second_factorial + mm.mean - mm.mean * mm.mean;
  CHECK(std::abs(mean - mm.mean) <
        3.0 * std::sqrt(var / static_cast<double>(reps)));
  for (std::uint64_t k = 0; k < 6; ++k) {
    const double p = pmf(lf, k);
    const double freq =
        static_cast<double>(counts[k]) / static_cast<double>(reps);
    CHECK(std::abs(freq - p) <
          4.0 * std::sqrt(p * (1 - p) / static_cast<double>(reps)));
  }
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(LinearFractional(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(LinearFractional(0.3, 0.3), std::domain_error);
  CHECK_THROWS_AS(LinearFractional(2.0, -0.1), std::domain_error);
  CHECK_NOTHROW(LinearFractional(1.0, 0.0));
  CHECK_NOTHROW(LinearFractional(0.5, 0.5));
}
