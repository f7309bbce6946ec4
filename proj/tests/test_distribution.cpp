#include "tanaka/distribution.hpp"

#include "tanaka/models.hpp"
#include "tanaka/prolong.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tanaka;

namespace {
const std::vector<std::string> xyz = {"x", "y", "z"};

PolyVectorField field(const std::vector<std::string>& coeffs,
                      const std::vector<std::string>& coords) {
  return PolyVectorField::parse(coeffs, coords);
}
}  // namespace

TEST_CASE("lie bracket hand values") {
  PolyVectorField dx = field({"1", "0", "0"}, xyz);
  PolyVectorField heis2 = field({"0", "1", "x"}, xyz);
  CHECK(lie_bracket(dx, heis2) == field({"0", "0", "1"}, xyz));

  PolyVectorField mart2 = field({"0", "1", "x^2"}, xyz);
  CHECK(lie_bracket(dx, mart2) == field({"0", "0", "2x"}, xyz));

  CHECK(lie_bracket(mart2, mart2).is_zero());
  CHECK(lie_bracket(dx, mart2) == [&] {
    PolyVectorField f = lie_bracket(mart2, dx);
    for (Poly& p : f.comp) p = Rat(-1) * p;
    return f;
  }());
}

TEST_CASE("derived flag of the heisenberg frame") {
  Flag flag = derived_flag(models::heisenberg_frame(), xyz, 4);
  CHECK(flag.generic_growth() == std::vector<std::size_t>{2, 3});
  CHECK(flag.nu_hat == 2);
  CHECK(flag.bracket_generating);
  CHECK(growth_vector_at(flag, Vec(3)) == std::vector<std::size_t>{2, 3});
  CHECK(regular_at(flag, Vec(3)));
}

TEST_CASE("derived flag of the martinet frame") {
  Flag flag = derived_flag(models::martinet_frame(), xyz, 4);
  CHECK(flag.generic_growth() == std::vector<std::size_t>{2, 3});
  CHECK(flag.nu_hat == 2);

  CHECK(growth_vector_at(flag, Vec(3)) == std::vector<std::size_t>{2, 2, 3});
  CHECK_FALSE(regular_at(flag, Vec(3)));

  Vec p100 = {Rat(1), Rat(0), Rat(0)};
  CHECK(growth_vector_at(flag, p100) == std::vector<std::size_t>{2, 3});
  CHECK(regular_at(flag, p100));

  CHECK_THROWS_AS(growth_vector_at(flag, Vec(2)), std::invalid_argument);
}

TEST_CASE("derived flag of the (2,3,5) frame") {
  Flag flag = derived_flag(models::frame_235(), models::coords_235(), 6);
  CHECK(flag.generic_growth() == std::vector<std::size_t>{2, 3, 5});
  CHECK(flag.nu_hat == 3);
  // the specific brackets behind the growth
  auto x1 = models::frame_235()[0], x2 = models::frame_235()[1];
  PolyVectorField b12 = lie_bracket(x1, x2);
  CHECK(b12 == field({"0", "0", "1", "0", "2x1"}, models::coords_235()));
  CHECK(lie_bracket(x1, b12) == field({"0", "0", "0", "0", "2"}, models::coords_235()));
  CHECK(lie_bracket(x2, b12) == field({"0", "0", "0", "-1", "0"}, models::coords_235()));
}

TEST_CASE("nilpotent approximation at regular points") {
  SECTION("heisenberg frame gives the heisenberg algebra") {
    Flag flag = derived_flag(models::heisenberg_frame(), xyz, 4);
    auto [g, frame] = gnla_at(flag, Vec(3));
    Gnla heis = Gnla::heisenberg(1);
    CHECK(g.depth() == 2);
    CHECK(g.dim(-1) == 2);
    CHECK(g.dim(-2) == 1);
    CHECK(g.bracket_basis(-1, 0, -1, 1) == Vec{1});
    CHECK(check_fundamental(g));
  }
  SECTION("martinet frame away from the singular plane") {
    Flag flag = derived_flag(models::martinet_frame(), xyz, 4);
    Vec p = {Rat(1), Rat(0), Rat(0)};
    auto [g, frame] = gnla_at(flag, p);
    CHECK(g.dim(-1) == 2);
    CHECK(g.dim(-2) == 1);
    CHECK(g.bracket_basis(-1, 0, -1, 1) == Vec{1});
  }
  SECTION("the (2,3,5) frame at the origin") {
    Flag flag = derived_flag(models::frame_235(), models::coords_235(), 6);
    auto [g, frame] = gnla_at(flag, Vec(5));
    CHECK(g.dim(-1) == 2);
    CHECK(g.dim(-2) == 1);
    CHECK(g.dim(-3) == 2);
    CHECK(validate_gnla(g.to_spec()).ok());
    CHECK(check_fundamental(g));
    CHECK(g.bracket_basis(-1, 0, -1, 1) == Vec{1});        // [e1,e2] = e3
    CHECK(g.bracket_basis(-1, 0, -2, 0) == Vec{1, 0});     // [e1,e3] = e4
    CHECK(g.bracket_basis(-1, 1, -2, 0) == Vec{0, 1});     // [e2,e3] = e5
  }
  SECTION("abelian frame") {
    std::vector<std::string> co = {"x", "y"};
    Flag flag = derived_flag({field({"1", "0"}, co), field({"0", "1"}, co)}, co, 2);
    auto [g, frame] = gnla_at(flag, Vec(2));
    CHECK(g.depth() == 1);
    CHECK(g.dim(-1) == 2);
  }
  SECTION("irregular points are rejected") {
    Flag flag = derived_flag(models::martinet_frame(), xyz, 4);
    CHECK_THROWS_AS(gnla_at(flag, Vec(3)), math_error);
  }
}

TEST_CASE("the extracted algebra is frame-order independent up to dimensions") {
  auto fields = models::frame_235();
  Flag f1 = derived_flag({fields[0], fields[1]}, models::coords_235(), 6);
  Flag f2 = derived_flag({fields[1], fields[0]}, models::coords_235(), 6);
  auto [g1, fr1] = gnla_at(f1, Vec(5));
  auto [g2, fr2] = gnla_at(f2, Vec(5));
  for (int d = -1; d >= -3; --d) CHECK(g1.dim(d) == g2.dim(d));
  CHECK(der0(g1).space.dim() == der0(g2).space.dim());
  auto st1 = prolong(g1, std::nullopt, {}, 6);
  auto st2 = prolong(g2, std::nullopt, {}, 6);
  CHECK(dims(st1).total == dims(st2).total);
}

TEST_CASE("martinet singular locus is a proper subset: random points off it are regular") {
  Flag flag = derived_flag(models::martinet_frame(), xyz, 4);
  std::mt19937 rng(5150);
  std::uniform_int_distribution<int> num(-6, 6);
  std::uniform_int_distribution<int> den(1, 4);
  int tested = 0;
  while (tested < 10) {
    Vec p = {make_rat(num(rng), den(rng)), make_rat(num(rng), den(rng)),
             make_rat(num(rng), den(rng))};
    if (p[0] == 0) continue;
    ++tested;
    CHECK(regular_at(flag, p));
    CHECK(growth_vector_at(flag, p) == std::vector<std::size_t>{2, 3});
  }
  // and points on the singular plane are not
  Vec s = {Rat(0), Rat(2), make_rat(-1, 3)};
  CHECK_FALSE(regular_at(flag, s));
}

TEST_CASE("generic rank over the function field") {
  std::vector<std::string> co = {"x", "y", "z"};
  std::vector<PolyVectorField> gens = {field({"1", "0", "0"}, co),
                                       field({"x", "x", "0"}, co),
                                       field({"0", "0", "2x"}, co)};
  CHECK(generic_rank(gens) == 3);  // x is invertible generically
  std::vector<PolyVectorField> dep = {field({"1", "x", "0"}, co),
                                      field({"y", "x y", "0"}, co)};
  CHECK(generic_rank(dep) == 1);  // second is y times the first
}
