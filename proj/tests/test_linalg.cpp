#include "tanaka/linalg.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tanaka;

namespace {

Matrix mat(std::initializer_list<std::initializer_list<int>> rows) {
  std::size_t r = rows.size(), c = rows.begin()->size();
  Matrix m(r, c);
  std::size_t i = 0;
  for (const auto& row : rows) {
    std::size_t j = 0;
    for (int v : row) m(i, j++) = v;
    ++i;
  }
  return m;
}

// independent oracle: plain rational Gauss-Jordan, no fraction-free tricks
Matrix naive_rref(Matrix m) {
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col) == 0) ++p;
    if (p == m.rows()) continue;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(row, j));
    Rat pv = m(row, col);
    for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) /= pv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == 0) continue;
      Rat f = m(i, col);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= f * m(row, j);
    }
    ++row;
  }
  return m;
}

Matrix random_matrix(std::mt19937& rng, std::size_t r, std::size_t c) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = make_rat(num(rng), den(rng));
  return m;
}

}  // namespace

TEST_CASE("rational parsing and canonical form") {
  Rat r = parse_rational("6/4");
  CHECK(numerator(r) == 3);
  CHECK(denominator(r) == 2);
  CHECK(rat_str(r) == "3/2");
  CHECK(rat_str(parse_rational("-6/4")) == "-3/2");
  CHECK(rat_str(parse_rational(" 7 ")) == "7");
  CHECK(parse_rational("0/5") == 0);
  CHECK_THROWS_AS(parse_rational("1/0"), parse_error);
  CHECK_THROWS_AS(parse_rational("abc"), parse_error);
  CHECK_THROWS_AS(parse_rational(""), parse_error);
  // denominators stay positive through arithmetic
  Rat x = make_rat(1, -2);
  CHECK(denominator(x) > 0);
  CHECK(rat_str(x) == "-1/2");
}

TEST_CASE("rref on the frozen examples") {
  RrefResult id2 = rref(Matrix::identity(2));
  CHECK(id2.r == Matrix::identity(2));
  CHECK(id2.pivot_cols == std::vector<std::size_t>{0, 1});
  CHECK(id2.rank == 2);

  RrefResult z3 = rref(Matrix(3, 3));
  CHECK(z3.r == Matrix(3, 3));
  CHECK(z3.rank == 0);
  CHECK(z3.pivot_cols.empty());

  RrefResult dep = rref(mat({{1, 2}, {2, 4}}));
  CHECK(dep.r == mat({{1, 2}, {0, 0}}));
  CHECK(dep.rank == 1);
}

TEST_CASE("kernel bases on the frozen examples") {
  CHECK(kernel_basis(Matrix::identity(4)).dim() == 0);
  Subspace full = kernel_basis(Matrix(2, 3));
  CHECK(full.dim() == 3);
  CHECK(full == Subspace::full(3));

  Subspace k = kernel_basis(mat({{1, 1, 0}}));
  CHECK(k.dim() == 2);
  CHECK(k.contains(Vec{1, -1, 0}));
  CHECK(k.contains(Vec{0, 0, 1}));
  CHECK_FALSE(k.contains(Vec{1, 0, 0}));
}

TEST_CASE("membership coordinates") {
  Subspace s = Subspace::span_of(mat({{1, 0}, {0, 1}}));
  CHECK(membership(Vec{0, 0}, s) == Vec{0, 0});
  Subspace line = Subspace::span_of(mat({{1, 0}}));
  CHECK(membership(Vec{1, 0}, line) == Vec{1});
  CHECK_FALSE(membership(Vec{1, 1}, line).has_value());
  CHECK_THROWS_AS(membership(Vec{1, 1, 1}, line), std::invalid_argument);
}

TEST_CASE("intersection on the frozen examples") {
  Subspace b = Subspace::span_of(mat({{1, 2, 3}}));
  CHECK(intersect(Subspace::full(3), b) == b);

  Subspace l1 = Subspace::span_of(mat({{1, 0}}));
  Subspace l2 = Subspace::span_of(mat({{1, 1}}));
  CHECK(intersect(l1, l2).dim() == 0);

  Subspace a = Subspace::span_of(mat({{1, 0, 0}, {0, 1, 0}}));
  Subspace c = Subspace::span_of(mat({{0, 1, 0}, {0, 0, 1}}));
  CHECK(intersect(a, c) == Subspace::span_of(mat({{0, 1, 0}})));

  CHECK_THROWS_AS(intersect(l1, b), std::invalid_argument);
}

TEST_CASE("random matrices: fraction-free rref equals the plain oracle") {
  std::mt19937 rng(20240901);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 1 + trial % 5, c = 1 + (trial * 7) % 6;
    Matrix m = random_matrix(rng, r, c);
    CHECK(rref(m).r == naive_rref(m));
  }
}

TEST_CASE("random matrices: kernel and rank identities") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t r = 1 + trial % 4, c = 1 + (trial * 5) % 6;
    Matrix m = random_matrix(rng, r, c);
    RrefResult rr = rref(m);
    Subspace ker = kernel_basis(m);
    CHECK(rr.rank + ker.dim() == c);
    // m k^T = 0 for every kernel row
    for (std::size_t kr = 0; kr < ker.dim(); ++kr) {
      Vec kv = ker.basis().row(kr);
      for (std::size_t i = 0; i < r; ++i) {
        Rat dot = 0;
        for (std::size_t j = 0; j < c; ++j) dot += m(i, j) * kv[j];
        CHECK(dot == 0);
      }
    }
  }
}

TEST_CASE("intersection is commutative, associative, idempotent") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t amb = 4 + trial % 2;
    Subspace a = Subspace::span_of(random_matrix(rng, 2, amb));
    Subspace b = Subspace::span_of(random_matrix(rng, 2, amb));
    Subspace c = Subspace::span_of(random_matrix(rng, 3, amb));
    CHECK(intersect(a, b) == intersect(b, a));
    CHECK(intersect(intersect(a, b), c) == intersect(a, intersect(b, c)));
    CHECK(intersect(a, a) == a);
    // dimension formula dim(a&b) = dim a + dim b - dim(a+b)
    CHECK(intersect(a, b).dim() + sum(a, b).dim() == a.dim() + b.dim());
  }
}

TEST_CASE("canonical form: different spanning sets give identical bases") {
  std::mt19937 rng(999);
  for (int trial = 0; trial < 25; ++trial) {
    std::size_t amb = 5;
    Matrix base = random_matrix(rng, 3, amb);
    // second spanning set: shuffled invertible combinations of the first
    Matrix mixed(4, amb);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        Rat c = coef(rng);
        if (i == j) c += 5;  // keep full rank
        mixed.add_scaled_row(i, c, base.row(j % 3));
      }
    }
    Subspace s1 = Subspace::span_of(base);
    Subspace s2 = Subspace::span_of(vstack(mixed, base));
    CHECK(s1 == s2);
    CHECK(s1.basis() == s2.basis());
  }
}
