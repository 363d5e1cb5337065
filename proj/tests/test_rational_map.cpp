#include "gaugeflow/rational_map.hpp"

#include <catch_amalgamated.hpp>

using namespace gaugeflow;

TEST_CASE("parse named maps") {
  const cplx z0(0.3, -0.7);
  REQUIRE(std::abs(RationalMap::parse("z")(z0) - z0) < 1e-15);
  REQUIRE(std::abs(RationalMap::parse("z^2")(z0) - z0 * z0) < 1e-15);
  REQUIRE(std::abs(RationalMap::parse("(z-1)/(z+1)")(z0) - (z0 - 1.0) / (z0 + 1.0)) < 1e-15);
  REQUIRE(std::abs(RationalMap::parse("-1/z")(z0) + 1.0 / z0) < 1e-15);
  REQUIRE(std::abs(RationalMap::parse("z+i")(z0) - (z0 + I_unit)) < 1e-15);
  REQUIRE(std::abs(RationalMap::parse("2*z - 0.5")(z0) - (2.0 * z0 - 0.5)) < 1e-15);
  REQUIRE(std::abs(RationalMap::parse("0.7+0.3i")(z0) - cplx(0.7, 0.3)) < 1e-15);
  REQUIRE(std::abs(RationalMap::parse("2z^2 - 3(z+1)")(z0) - (2.0 * z0 * z0 - 3.0 * (z0 + 1.0))) < 1e-14);
  REQUIRE_THROWS_AS(RationalMap::parse("z+"), invalid_input);
  REQUIRE_THROWS_AS(RationalMap::parse("sin(z)"), invalid_input);
  REQUIRE_THROWS_AS(RationalMap::parse("1/(z-z)"), invalid_input);
}

TEST_CASE("degree after gcd reduction") {
  REQUIRE(RationalMap::parse("z").degree() == 1);
  REQUIRE(RationalMap::parse("z^2").degree() == 2);
  REQUIRE(RationalMap::parse("(z-1)/(z+1)").degree() == 1);
  const RationalMap r = RationalMap::parse("(z^2-1)/(z+1)");
  REQUIRE(r.degree() == 1);
  REQUIRE(r.denominator().degree() == 0);
  REQUIRE(RationalMap::parse("3").is_constant());
}

TEST_CASE("analytic derivative against a complex-step difference") {
  for (const char* s : {"z^2", "(z-1)/(z+1)", "-1/z", "(z^3+2*i)/(z^2-z+4)"}) {
    const RationalMap m = RationalMap::parse(s);
    const cplx z0(0.4, 0.9), h = 1e-5;
    const cplx fd = (m(z0 + h) - m(z0 - h)) / (2.0 * h);
    REQUIRE(std::abs(fd - m.derivative(z0)) < 1e-8);
  }
}

TEST_CASE("roots, poles and critical points") {
  const RationalMap m = RationalMap::parse("z^2");
  const auto c = m.critical_points();
  REQUIRE(c.size() == 1);
  REQUIRE(std::abs(c[0]) < 1e-14);
  const auto p = RationalMap::parse("(z-1)/(z+1)").poles();
  REQUIRE(p.size() == 1);
  REQUIRE(std::abs(p[0] + 1.0) < 1e-14);
  REQUIRE(RationalMap::parse("(z-1)/(z+1)").critical_points().empty());
}

TEST_CASE("composition") {
  const RationalMap f = RationalMap::parse("(z-1)/(z+1)"), g = RationalMap::parse("2*z+i");
  const cplx z0(-0.2, 0.35);
  REQUIRE(std::abs(f.compose(g)(z0) - f(g(z0))) < 1e-14);
  REQUIRE(std::abs(g.compose(f)(z0) - g(f(z0))) < 1e-14);
}
