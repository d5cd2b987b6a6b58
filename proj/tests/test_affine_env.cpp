#include <cmath>

#include "doctest.h"
#include "lfgw/affine.hpp"
#include "lfgw/env.hpp"
#include "lfgw/errors.hpp"
#include "lfgw/logspace.hpp"
#include "lfgw/rng.hpp"

using namespace lfgw;

TEST_CASE("path folding closed forms") {
  const std::vector<EnvPair> path(4, EnvPair(2.0, 1.0));
  const PathState st = fold_path(path);
  CHECK(st.n == 4);
  CHECK(st.pi() == doctest::Approx(16.0).epsilon(1e-14));
  CHECK(st.r() == doctest::Approx(15.0).epsilon(1e-14));  // 1 + 2 + 4 + 8
  // R_4^(-1) = 1/2 + 1/4 + 1/8 + 1/16
  CHECK(st.rdual() == doctest::Approx(15.0 / 16.0).epsilon(1e-14));
  CHECK(st.m() == doctest::Approx(15.0 / 16.0).epsilon(1e-14));
  CHECK(st.s() == doctest::Approx(-std::log(16.0)).epsilon(1e-14));
  CHECK(backward_eval(st, 1.0) == doctest::Approx(31.0).epsilon(1e-13));
  CHECK(backward_eval(st, 0.0) == doctest::Approx(15.0).epsilon(1e-13));
}

TEST_CASE("pathwise duality on mixed paths") {
  const std::vector<EnvPair> path = {
      EnvPair(2.0, 1.0), EnvPair(0.5, 0.7), EnvPair(1.3, 0.2),
      EnvPair(0.9, 0.4)};
  const PathState fw = fold_path(path);
  const PathState bw = dual_path(path);
  // R_n/Pi_n of the forward order equals R_n^(-1) of the reversed order,
  // pathwise and exactly.
  CHECK(fw.m() == doctest::Approx(bw.rdual()).epsilon(1e-14));
  CHECK(bw.m() == doctest::Approx(fw.rdual()).epsilon(1e-14));
  CHECK(fw.pi() == doctest::Approx(bw.pi()).epsilon(1e-14));
}

TEST_CASE("pair validation") {
  CHECK_THROWS_AS(EnvPair(0.0, 2.0), std::domain_error);
  CHECK_THROWS_AS(EnvPair(0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(EnvPair(0.4, 0.4), std::domain_error);
  CHECK_NOTHROW(EnvPair(0.5, 0.5));
}

TEST_CASE("env spec construction and moments") {
  const EnvSpec table = EnvSpec::table(
      {{2.0, 1.0, 0.5}, {0.5, 0.7, 0.5}});
  CHECK(e_log_a(table) ==
        doctest::Approx(0.5 * std::log(2.0) + 0.5 * std::log(0.5))
            .epsilon(1e-14));
  CHECK(e_a(table) == doctest::Approx(1.25).epsilon(1e-14));
  CHECK(e_b(table) == doctest::Approx(0.85).epsilon(1e-14));
  CHECK(var_log_a(table) ==
        doctest::Approx(std::log(2.0) * std::log(2.0)).epsilon(1e-12));
  CHECK_FALSE(a_identically_one(table));
  CHECK(a_identically_one(EnvSpec::constant(1.0, 1.0)));
  CHECK_THROWS_AS(EnvSpec::table({{2.0, 1.0, 0.4}}), std::domain_error);
  CHECK_THROWS_AS(EnvSpec::constant(0.3, 0.3), std::domain_error);
}

TEST_CASE("cumulant function and tilt") {
  SUBCASE("constant") {
    const EnvSpec c = EnvSpec::constant(2.0, 1.0);
    CHECK(kappa(c) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    CHECK(psi(c, 0.5) == doctest::Approx(-0.5 * std::log(2.0)).epsilon(1e-14));
    CHECK(psi_prime(c, 0.0) == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
  }
  SUBCASE("two-atom tilted weights") {
    const EnvSpec t = EnvSpec::table({{2.0, 1.0, 0.5}, {0.5, 1.0, 0.5}});
    // E[1/A] = 0.5/2 + 0.5*2 = 1.25
    CHECK(kappa(t) == doctest::Approx(std::log(1.25)).epsilon(1e-13));
    const EnvSpec tt = tilt(t);
    const DiscreteTable tab = *tt.as_table();
    // tilted weights proportional to w/A: {0.25, 1}/1.25
    CHECK(tab.atoms[0].w == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(tab.atoms[1].w == doctest::Approx(0.8).epsilon(1e-13));
    // the two expressions for the tilted drift agree:
    // E-hat[log(1/A)] = e^{-kappa} E[(1/A) log(1/A)]
    const double direct = -e_log_a(tt);
    const double k = kappa(t);
    const double via_weights =
        std::exp(-k) *
        (0.5 * 0.5 * (-std::log(2.0)) + 0.5 * 2.0 * std::log(2.0));
    CHECK(direct == doctest::Approx(via_weights).epsilon(1e-12));
  }
  SUBCASE("lognormal tilt shifts the location") {
    const EnvSpec ln = EnvSpec::lognormal(0.3, 0.4, BRuleConst{1.5});
    const EnvSpec lt = tilt(ln);
    const auto& v = std::get<LogNormalA>(lt.variant());
    CHECK(v.mu == doctest::Approx(0.3 - 0.16).epsilon(1e-14));
    CHECK(v.sigma == doctest::Approx(0.4));
  }
}

TEST_CASE("subcritical regimes") {
  SUBCASE("strongly") {
    const SubcriticalRegime r = subregime(EnvSpec::constant(2.0, 1.0));
    CHECK(r.label == SubcriticalRegime::Label::strongly);
  }
  SUBCASE("intermediately, psi'(1) = 0 exactly") {
    const EnvSpec t = EnvSpec::table({{2.0, 1.0, 0.8}, {0.5, 1.0, 0.2}});
    const SubcriticalRegime r = subregime(t);
    CHECK(r.psi1_prime == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(r.label == SubcriticalRegime::Label::intermediately);
  }
  SUBCASE("weakly") {
    const EnvSpec t = EnvSpec::table({{2.0, 1.0, 0.6}, {0.5, 1.0, 0.4}});
    const SubcriticalRegime r = subregime(t);
    CHECK(r.psi0_prime < 0.0);
    CHECK(r.psi1_prime > 0.0);
    CHECK(r.label == SubcriticalRegime::Label::weakly);
  }
  SUBCASE("not subcritical") {
    const SubcriticalRegime r = subregime(EnvSpec::constant(0.5, 1.0));
    CHECK(r.label == SubcriticalRegime::Label::not_subcritical);
  }
}

TEST_CASE("sampling frequencies follow the weights") {
  const EnvSpec t = EnvSpec::table({{2.0, 1.0, 0.3}, {0.5, 0.7, 0.7}});
  RngStream rng = make_stream(5, 0, StreamPurpose::environment);
  int first = 0;
  const int reps = 100000;
  for (int i = 0; i < reps; ++i) {
    if (sample_pair(t, rng).A == 2.0) ++first;
  }
  const double freq = static_cast<double>(first) / reps;
  CHECK(std::abs(freq - 0.3) < 4.0 * std::sqrt(0.3 * 0.7 / reps));
}

TEST_CASE("lognormal sampling respects truncation") {
  const EnvSpec ln = EnvSpec::lognormal(-0.2, 0.6, BRuleLine{2.0});
  RngStream rng = make_stream(6, 0, StreamPurpose::environment);
  for (int i = 0; i < 2000; ++i) {
    const EnvPair p = sample_pair(ln, rng);
    CHECK(p.A < 1.0);
    CHECK(p.B == doctest::Approx(2.0 * (1.0 - p.A)).epsilon(1e-12));
  }
}

TEST_CASE("json round trips") {
  const EnvSpec t = EnvSpec::table({{2.0, 1.0, 0.25}, {0.5, 0.7, 0.75}});
  const EnvSpec back = env_from_json(env_to_json(t));
  const DiscreteTable a = *t.as_table();
  const DiscreteTable b = *back.as_table();
  REQUIRE(a.atoms.size() == b.atoms.size());
  for (std::size_t i = 0; i < a.atoms.size(); ++i) {
    CHECK(a.atoms[i].A == b.atoms[i].A);
    CHECK(a.atoms[i].B == b.atoms[i].B);
    CHECK(a.atoms[i].w == b.atoms[i].w);
  }
  const EnvSpec ln = EnvSpec::lognormal(0.1, 0.5, BRuleConst{2.0});
  const EnvSpec ln_back = env_from_json(env_to_json(ln));
  CHECK(std::get<LogNormalA>(ln_back.variant()).mu == 0.1);
  const EnvSpec dl = EnvSpec::degenerate_line(
      2.0, LineSign::plus, {{0.5, 0.5}, {0.25, 0.5}});
  const EnvSpec dl_back = env_from_json(env_to_json(dl));
  CHECK(std::get<DegenerateLine>(dl_back.variant()).x == 2.0);
  CHECK_THROWS(env_from_json("{\"variant\":\"nope\"}"));
}
