#include "tanaka/gnla.hpp"
#include "tanaka/models.hpp"
#include "tanaka/serialize.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tanaka;

namespace {

bool has_kind(const ValidationReport& r, const std::string& kind) {
  for (const auto& v : r.items)
    if (v.kind == kind) return true;
  return false;
}

GnlaSpec heisenberg_spec() {
  GnlaSpec spec;
  spec.degrees[-1] = {"e1", "e2"};
  spec.degrees[-2] = {"e3"};
  spec.brackets.push_back({"e1", "e2", {{"e3", Rat(1)}}});
  return spec;
}

}  // namespace

TEST_CASE("abelian and Heisenberg tables validate") {
  GnlaSpec ab;
  ab.degrees[-1] = {"e1", "e2"};
  CHECK(validate_gnla(ab).ok());

  CHECK(validate_gnla(heisenberg_spec()).ok());
  for (std::size_t d = 1; d <= 4; ++d) {
    Gnla h = Gnla::heisenberg(d);
    CHECK(validate_gnla(h.to_spec()).ok());
    CHECK(check_fundamental(h));
    CHECK(h.dim(-1) == 2 * d);
    CHECK(h.dim(-2) == 1);
  }
}

TEST_CASE("grading violations are reported with witnesses") {
  GnlaSpec spec = heisenberg_spec();
  spec.brackets.push_back({"e1", "e3", {{"e2", Rat(1)}}});  // lands at the wrong degree
  ValidationReport r = validate_gnla(spec);
  CHECK_FALSE(r.ok());
  CHECK(has_kind(r, "depth"));
  CHECK_THROWS_AS(Gnla::from_spec(spec), math_error);

  GnlaSpec spec2 = heisenberg_spec();
  spec2.degrees[-3] = {"e4"};
  spec2.brackets.push_back({"e1", "e2", {{"e4", Rat(1)}}});  // -2 bracket into degree -3
  CHECK(has_kind(validate_gnla(spec2), "grading"));
}

TEST_CASE("antisymmetry violations are reported") {
  GnlaSpec spec = heisenberg_spec();
  spec.brackets.push_back({"e2", "e1", {{"e3", Rat(1)}}});  // should be -1
  CHECK(has_kind(validate_gnla(spec), "antisymmetry"));

  GnlaSpec diag = heisenberg_spec();
  diag.brackets.push_back({"e1", "e1", {{"e3", Rat(1)}}});
  CHECK(has_kind(validate_gnla(diag), "antisymmetry"));
}

TEST_CASE("jacobi violations are reported with the witnessing triple") {
  GnlaSpec spec;
  spec.degrees[-1] = {"a", "b", "c"};
  spec.degrees[-2] = {"z"};
  spec.degrees[-3] = {"w"};
  spec.brackets.push_back({"a", "b", {{"z", Rat(1)}}});
  spec.brackets.push_back({"b", "c", {{"z", Rat(1)}}});
  spec.brackets.push_back({"c", "a", {{"z", Rat(1)}}});
  spec.brackets.push_back({"z", "a", {{"w", Rat(1)}}});
  ValidationReport r = validate_gnla(spec);
  CHECK(has_kind(r, "jacobi"));
  bool witness = false;
  for (const auto& v : r.items) witness = witness || v.detail.find("a") != std::string::npos;
  CHECK(witness);
}

TEST_CASE("fundamentality") {
  CHECK(check_fundamental(Gnla::heisenberg(1)));
  GnlaSpec dud;
  dud.degrees[-1] = {"e1", "e2"};
  dud.degrees[-2] = {"e3"};
  CHECK_FALSE(check_fundamental(Gnla::from_spec(dud)));  // no brackets at all
  CHECK(check_fundamental(models::gnla_235()));
  CHECK(validate_gnla(models::gnla_235().to_spec()).ok());
}

TEST_CASE("heisenberg structure constants") {
  Gnla h = Gnla::heisenberg(2);
  // [x_i, p_i] = z, everything else zero
  CHECK(h.bracket_basis(-1, 0, -1, 2) == Vec{1});
  CHECK(h.bracket_basis(-1, 1, -1, 3) == Vec{1});
  CHECK(h.bracket_basis(-1, 0, -1, 3) == Vec{0});
  CHECK(h.bracket_basis(-1, 2, -1, 0) == Vec{-1});
  CHECK(h.bracket_basis(-1, 0, -1, 0) == Vec{0});
  // bilinear extension: [x1 + 2 x2, p1 + 3 p2] = z + 6 z
  Vec a = {Rat(1), Rat(2), Rat(0), Rat(0)};
  Vec b = {Rat(0), Rat(0), Rat(1), Rat(3)};
  CHECK(h.bracket(-1, a, -1, b) == Vec{7});
}

TEST_CASE("serialization round trip") {
  for (const Gnla& g : {Gnla::heisenberg(2), models::gnla_235(), Gnla::abelian(3)}) {
    json j = gnla_to_json(g);
    Gnla back = Gnla::from_spec(gnla_from_json(j));
    CHECK(back == g);
    CHECK(gnla_to_json(back) == j);
  }
}
