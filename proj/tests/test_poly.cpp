#include "tanaka/poly.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tanaka;

namespace {
const std::vector<std::string> xyz = {"x", "y", "z"};
}

TEST_CASE("parser handles coefficients, powers, signs") {
  Poly p = Poly::parse("x^2 - 3/2 y + 1", xyz);
  CHECK(p.coeff({2, 0, 0}) == 1);
  CHECK(p.coeff({0, 1, 0}) == make_rat(-3, 2));
  CHECK(p.coeff({0, 0, 0}) == 1);
  CHECK(Poly::parse("2x*y", xyz) == Poly::parse("2 x y", xyz));
  CHECK(Poly::parse("(x+y)^2", xyz) ==
        Poly::parse("x^2 + 2xy + y^2", xyz));
  CHECK(Poly::parse("-x", xyz) + Poly::parse("x", xyz) == Poly(3));
  CHECK(Poly::parse("0", xyz).is_zero());
  CHECK_THROWS_AS(Poly::parse("w + 1", xyz), parse_error);
  CHECK_THROWS_AS(Poly::parse("x +", xyz), parse_error);
  CHECK_THROWS_AS(Poly::parse("x ^", xyz), parse_error);
}

TEST_CASE("arithmetic, derivative, evaluation") {
  Poly f = Poly::parse("x^2 y + z", xyz);
  CHECK(f.derivative(0) == Poly::parse("2 x y", xyz));
  CHECK(f.derivative(1) == Poly::parse("x^2", xyz));
  CHECK(f.derivative(2) == Poly::parse("1", xyz));
  Vec pt = {Rat(2), Rat(3), make_rat(1, 2)};
  CHECK(f.eval(pt) == make_rat(25, 2));
  Poly g = Poly::parse("x - y", xyz);
  CHECK((f * g).eval(pt) == f.eval(pt) * g.eval(pt));
  CHECK(f.min_total_degree() == 1);
  CHECK(f.max_total_degree() == 3);
  CHECK_FALSE(Poly(3).min_total_degree().has_value());
}

TEST_CASE("substitution renames and composes") {
  Poly f = Poly::parse("x y + z^2", xyz);
  std::vector<Poly> images = {Poly::variable(3, 1), Poly::variable(3, 2),
                              Poly::variable(3, 0)};
  CHECK(f.substitute(images) == Poly::parse("y z + x^2", xyz));
}

TEST_CASE("printing round-trips through the parser") {
  Poly f = Poly::parse("2x^2 - 1/3 y z + 7 - z", xyz);
  CHECK(Poly::parse(f.str(xyz), xyz) == f);
  CHECK(Poly(3).str(xyz) == "0");
}
