#include <cmath>

#include "doctest.h"
#include "lfgw/classify.hpp"
#include "lfgw/env.hpp"
#include "lfgw/errors.hpp"

using namespace lfgw;

TEST_CASE("degenerate line detection") {
  SUBCASE("plus line from a table") {
    const EnvSpec t = EnvSpec::table({{0.5, 1.0, 0.5}, {0.25, 1.5, 0.5}});
    const auto x = fit_line(t, LineSign::plus);
    REQUIRE(x.has_value());
    CHECK(*x == doctest::Approx(2.0).epsilon(1e-12));
    CHECK_FALSE(fit_line(t, LineSign::minus).has_value());
  }
  SUBCASE("minus line from a table") {
    const EnvSpec t = EnvSpec::table({{1.5, 0.75, 0.5}, {2.0, 1.5, 0.5}});
    const auto x = fit_line(t, LineSign::minus);
    REQUIRE(x.has_value());
    CHECK(*x == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("generic table fits neither") {
    const EnvSpec t = EnvSpec::table({{0.5, 1.0, 0.5}, {0.25, 1.0, 0.5}});
    CHECK_FALSE(fit_line(t, LineSign::plus).has_value());
    CHECK_FALSE(fit_line(t, LineSign::minus).has_value());
  }
}

TEST_CASE("integral test values for tables") {
  // A >= 1 a.s. makes the minus integral degenerate (J- vanishes).
  const EnvSpec up = EnvSpec::table({{1.5, 1.0, 0.5}, {2.0, 1.0, 0.5}});
  CHECK(std::isinf(gm_integral(up, GmSide::minus).value));
  CHECK(gm_integral(up, GmSide::minus).exact);
  // hand value of I+ for a single-atom table: B/A = 0.5 gives log <= 0,
  // contributing nothing.
  const EnvSpec c = EnvSpec::constant(2.0, 0.5);
  CHECK(gm_integral(c, GmSide::plus).value == 0.0);
  // B/A = 2: I+ = log 2 / J+(log 2) with J+(y) = min(y, log 2) = log 2.
  const EnvSpec c2 = EnvSpec::constant(2.0, 4.0);
  CHECK(gm_integral(c2, GmSide::plus).value ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("classification of the named examples") {
  CHECK(classify(EnvSpec::constant(2.0, 1.0)).sub_case ==
        TrichotomySubCase::C2_1);
  CHECK(classify(EnvSpec::constant(0.5, 0.5)).sub_case ==
        TrichotomySubCase::C1_2);
  const Trichotomy strongly = classify(EnvSpec::constant(1.0, 1.0));
  CHECK(strongly.sub_case == TrichotomySubCase::C3_4);
  CHECK(strongly.criticality == Criticality::strongly_critical);
}

TEST_CASE("oscillating critical table") {
  const EnvSpec t = EnvSpec::table({{2.0, 1.0, 0.5}, {0.5, 1.0, 0.5}});
  const Trichotomy tri = classify(t);
  CHECK(tri.sub_case == TrichotomySubCase::C3_3);
  CHECK(tri.criticality == Criticality::critical);
}

TEST_CASE("supercritical generic table") {
  const EnvSpec t = EnvSpec::table({{0.5, 1.0, 0.5}, {0.25, 1.0, 0.5}});
  const Trichotomy tri = classify(t);
  CHECK(tri.sub_case == TrichotomySubCase::C1_1);
  CHECK(tri.criticality == Criticality::supercritical);
}

TEST_CASE("lognormal families") {
  SUBCASE("negative drift with constant B is exact") {
    const EnvSpec ln = EnvSpec::lognormal(-0.5, 0.3, BRuleConst{1.5});
    const Trichotomy tri = classify(ln);
    CHECK(tri.sub_case == TrichotomySubCase::C1_1);
  }
  SUBCASE("truncated line rule is a plus line") {
    const EnvSpec ln = EnvSpec::lognormal(-0.2, 0.5, BRuleLine{2.0});
    const Trichotomy tri = classify(ln);
    CHECK(tri.sub_case == TrichotomySubCase::C1_2);
    CHECK(tri.evidence.line_x == doctest::Approx(2.0));
  }
}

TEST_CASE("to_string coverage") {
  CHECK(to_string(TrichotomySubCase::C3_1) == "C3.1");
  CHECK(to_string(Criticality::subcritical) == "subcritical");
}
