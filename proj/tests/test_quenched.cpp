#include <cmath>

#include "doctest.h"
#include "lfgw/errors.hpp"
#include "lfgw/lf.hpp"
#include "lfgw/quenched.hpp"
#include "oracles.hpp"

using namespace lfgw;

namespace {

EnvPath constant_path(double a, double b, std::size_t n) {
  return EnvPath(std::vector<EnvPair>(n, EnvPair(a, b)));
}

}  // namespace

TEST_CASE("snapshot on the constant (2,1) path") {
  const EnvPath path = constant_path(2.0, 1.0, 3);
  const QuenchedSnapshot snap = snapshot(path, 3);
  CHECK(snap.law_zn.a() == doctest::Approx(8.0).epsilon(1e-13));
  CHECK(snap.law_zn.b() == doctest::Approx(7.0).epsilon(1e-13));
  CHECK(snap.q_n == doctest::Approx(14.0 / 15.0).epsilon(1e-13));
  CHECK(snap.cond_survival.p() == doctest::Approx(8.0 / 15.0).epsilon(1e-13));
  CHECK(snap.m_n == doctest::Approx(7.0 / 8.0).epsilon(1e-13));
  // reversed law LF(Pi_n, Pi_n R^(-1)): R_3^(-1) = 7/8
  CHECK(snap.reversed_law_zn.b() == doctest::Approx(7.0).epsilon(1e-13));
  CHECK(snap.reversed_cond_survival.p() ==
        doctest::Approx(8.0 / 15.0).epsilon(1e-13));
  // oracle: brute-force composition at s = 0 and a few coefficients
  const auto& pairs = path.pairs();
  CHECK(snap.q_n == doctest::Approx(
                        oracle::compose_gf(pairs, oracle::cd(0.0, 0.0)).real())
                        .epsilon(1e-13));
  const oracle::CircleGrid grid;
  const std::vector<double> coef = oracle::taylor(
      grid,
      [&pairs](oracle::cd s) { return oracle::compose_gf(pairs, s); }, 50);
  for (std::uint64_t k = 0; k < 50; ++k) {
    CHECK(std::abs(pmf(snap.law_zn, k) - coef[k]) < 1e-9);
  }
}

TEST_CASE("snapshot on the critical (1,1) path") {
  for (std::size_t n : {1u, 5u, 20u}) {
    const EnvPath path = constant_path(1.0, 1.0, n);
    const QuenchedSnapshot snap = snapshot(path, n);
    CHECK(snap.q_n == doctest::Approx(static_cast<double>(n) / (n + 1.0))
                          .epsilon(1e-13));
  }
}

TEST_CASE("snapshot at n = 0 is the point mass at one") {
  const EnvPath path = constant_path(2.0, 1.0, 2);
  const QuenchedSnapshot snap = snapshot(path, 0);
  CHECK(snap.q_n == 0.0);
  CHECK(snap.law_zn.a() == 1.0);
  CHECK(snap.law_zn.b() == 0.0);
  CHECK(snap.cond_survival.p() == 1.0);
  CHECK_THROWS_AS(snapshot(path, 3), std::out_of_range);
}

TEST_CASE("eve of extinction on the constant (2,1) path") {
  // forward parameter oracle at (n, l) = (1, 1): condition by enumeration
  const EnvPath path = constant_path(2.0, 1.0, 8);
  const EveParams ep = eve_of_extinction(path, 1, 1);
  const LinearFractional lf(2.0, 1.0);
  const double q1 = pmf(lf, 0);
  std::vector<double> joint;  // P(Z_1 = k, Z_2 = 0) for k >= 1
  double mass = 0.0;
  for (std::uint64_t k = 1; k <= 400; ++k) {
    const double p = pmf(lf, k) * std::pow(q1, static_cast<double>(k));
    joint.push_back(p);
    mass += p;
  }
  for (std::uint64_t k = 1; k <= 20; ++k) {
    const double expect = ep.param_fw *
                          std::pow(1.0 - ep.param_fw, static_cast<double>(k - 1));
    CHECK(joint[k - 1] / mass == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("reversed eve parameter is monotone toward 2/3") {
  const std::size_t l = 1;
  double prev = 1.0;
  for (std::size_t n : {1u, 2u, 4u, 8u, 16u}) {
    const EnvPath path = constant_path(2.0, 1.0, n + l);
    const EveParams ep = eve_of_extinction(path, n, l);
    // closed form: 1/3 + (2/3) / (2 - 2^{-n}), decreasing toward 2/3
    const double expect =
        1.0 / 3.0 + (2.0 / 3.0) / (2.0 - std::pow(2.0, -static_cast<double>(n)));
    CHECK(ep.param_rev == doctest::Approx(expect).epsilon(1e-12));
    CHECK(ep.param_rev <= prev);
    prev = ep.param_rev;
  }
  CHECK(prev == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
}

TEST_CASE("eve limit matches the dual tail") {
  const EnvPath path = constant_path(2.0, 1.0, 1);
  RngStream rng = make_stream(3, 0, StreamPurpose::perpetuity);
  const double limit = eve_of_extinction_limit(path, 1, EnvSpec::constant(2.0, 1.0),
                                               1e-10, 1 << 20, rng);
  CHECK(limit == doctest::Approx(2.0 / 3.0).epsilon(1e-8));
}

TEST_CASE("reduced laws") {
  const EnvPath path = constant_path(2.0, 1.0, 2);
  SUBCASE("interior generation") {
    const ReducedLaw rl = reduced_law(path, 1, 2);
    CHECK(rl.forward.p() == doctest::Approx(6.0 / 7.0).epsilon(1e-13));
  }
  SUBCASE("the ancestor") {
    CHECK(reduced_law(path, 0, 2).forward.p() == 1.0);
  }
  SUBCASE("m = n agrees with the snapshot conditional") {
    const ReducedLaw rl = reduced_law(path, 2, 2);
    const QuenchedSnapshot snap = snapshot(path, 2);
    CHECK(rl.forward.p() ==
          doctest::Approx(snap.cond_survival.p()).epsilon(1e-13));
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(reduced_law(path, 3, 2), std::domain_error);
  }
}

TEST_CASE("reduced offspring laws") {
  const EnvPath path = constant_path(2.0, 1.0, 2);
  CHECK(reduced_offspring_law(path, 0, 1, 2).forward.p() ==
        doctest::Approx(6.0 / 7.0).epsilon(1e-13));
  // last-step branching substitution
  const ReducedLaw last = reduced_offspring_law(path, 1, 2, 2);
  const PathState& s2 = path.state(2);
  const PathState& s1 = path.state(1);
  const double expect =
      1.0 - (s2.r() - s1.r()) / (s2.pi() + s2.r() - s1.r());
  CHECK(last.forward.p() == doctest::Approx(expect).epsilon(1e-13));
  CHECK_THROWS_AS(reduced_offspring_law(path, 2, 1, 2), std::domain_error);
}

TEST_CASE("reduced-law composition is exact for geometrics") {
  // parameter multiplicativity: p(l,n) * p_off(l,m,n) = p(m,n)
  const EnvPath path(
      {EnvPair(2.0, 1.0), EnvPair(0.5, 0.7), EnvPair(1.3, 0.2),
       EnvPair(0.9, 0.4)});
  for (std::size_t l = 0; l < 4; ++l) {
    for (std::size_t m = l + 1; m <= 4; ++m) {
      const double pl = reduced_law(path, l, 4).forward.p();
      const double pm = reduced_law(path, m, 4).forward.p();
      const double po = reduced_offspring_law(path, l, m, 4).forward.p();
      CHECK(pl * po == doctest::Approx(pm).epsilon(1e-12));
    }
  }
}

TEST_CASE("extinction limit") {
  RngStream rng = make_stream(4, 0, StreamPurpose::perpetuity);
  SUBCASE("constant (0.5, 1)") {
    const ExtinctionLimit el =
        extinction_limit(EnvSpec::constant(0.5, 1.0), 1e-10, 1 << 20, rng);
    CHECK(el.r_inf == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(el.q_e == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(el.second_order == doctest::Approx(0.25).epsilon(1e-8));
  }
  SUBCASE("constant (0.5, 0.5) never dies") {
    const ExtinctionLimit el =
        extinction_limit(EnvSpec::constant(0.5, 0.5), 1e-10, 1 << 20, rng);
    CHECK(el.q_e == doctest::Approx(0.0).epsilon(1e-9));
  }
  SUBCASE("subcritical environment is rejected") {
    CHECK_THROWS_AS(
        extinction_limit(EnvSpec::constant(2.0, 1.0), 1e-10, 1 << 20, rng),
        DivergentPerpetuity);
  }
}

TEST_CASE("martingale limit law") {
  const MartingaleLimitLaw pure = martingale_limit_law(1.0);
  CHECK(pure.w0 == 0.0);
  CHECK(pure.exp_rate == 1.0);
  const MartingaleLimitLaw mix = martingale_limit_law(2.0);
  CHECK(mix.w0 == doctest::Approx(0.5));
  // mixture mean: (1 - w0) * (1/rate) = 1
  CHECK((1.0 - mix.w0) / mix.exp_rate == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(martingale_limit_law(0.9), std::domain_error);
}

TEST_CASE("decomposition laws for constant (0.5, 1)") {
  const EnvPath path = constant_path(0.5, 1.0, 3);
  const DecompositionLaws dec = decomposition_laws(path, 1, 2.0);
  CHECK(dec.r_n_inf == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(dec.finite_line.w0 == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(dec.finite_line.geom.p() == doctest::Approx(2.0 / 3.0).epsilon(1e-13));
  CHECK(dec.infinite_line.p() == doctest::Approx(0.5).epsilon(1e-13));
  // the same answer one step further down the path
  const DecompositionLaws dec2 = decomposition_laws(path, 2, 2.0);
  CHECK(dec2.finite_line.w0 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("decomposition degeneracy") {
  const EnvPath path = constant_path(0.5, 0.5, 2);
  CHECK_THROWS_AS(decomposition_laws(path, 1, 1.0), DegenerateDecomposition);
}

TEST_CASE("constant-q coupling keeps the infinite-line parameter affine in B") {
  // A = 1 - B(1 - q) with q = 0.5: every pair has R_inf = 1/(1 - q) = 2.
  const double q = 0.5;
  const std::vector<double> bs = {0.6, 1.0, 1.4};
  std::vector<EnvPair> pairs;
  for (double b : bs) pairs.push_back(EnvPair(1.0 - b * (1.0 - q), b));
  const EnvPath path(pairs);
  const double r_inf = 1.0 / (1.0 - q);
  for (std::size_t n = 1; n <= 3; ++n) {
    const DecompositionLaws dec = decomposition_laws(path, n, r_inf);
    CHECK(dec.r_n_inf == doctest::Approx(r_inf).epsilon(1e-12));
    CHECK(dec.infinite_line.p() ==
          doctest::Approx(1.0 - bs[n - 1] * (1.0 - q)).epsilon(1e-12));
  }
}

TEST_CASE("critical diagnostics") {
  const EnvPath path = constant_path(1.0, 1.0, 10);
  const auto diag = critical_diagnostics(path, {1, 4, 10});
  REQUIRE(diag.size() == 3);
  CHECK(diag[1].m_n == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(diag[1].r_q_bar == doctest::Approx(4.0 / 5.0).epsilon(1e-13));
  CHECK(diag[2].r_q_bar == doctest::Approx(10.0 / 11.0).epsilon(1e-13));
  CHECK(critical_diagnostics(path, {}).empty());
  // not critical, still defined: constant (2,1) has M_n -> 1
  const EnvPath sub = constant_path(2.0, 1.0, 30);
  const auto d2 = critical_diagnostics(sub, {30});
  CHECK(d2[0].m_n == doctest::Approx(1.0 - std::pow(2.0, -30.0)).epsilon(1e-12));
}
