#include "tanaka/flat_models.hpp"

#include "tanaka/models.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace tanaka;

namespace {

Poly random_homogeneous(const ContactModel& cm, int weight, std::mt19937& rng) {
  auto monos = cm.component_monomials(weight);
  std::uniform_int_distribution<int> coef(-3, 3);
  Poly p(cm.nvars());
  for (const ExpVec& e : monos) p.add_term(e, coef(rng));
  return p;
}

}  // namespace

TEST_CASE("weights of the basic monomials") {
  ContactModel cm(2);
  CHECK(cm.weight(ExpVec{0, 0, 0}) == -2);  // the constant
  CHECK(cm.weight(ExpVec{1, 0, 0}) == -1);  // x
  CHECK(cm.weight(ExpVec{0, 0, 1}) == -1);  // p
  CHECK(cm.weight(ExpVec{0, 1, 0}) == 0);   // u
  CHECK(cm.weight(ExpVec{1, 1, 0}) == 1);   // u x
  CHECK(cm.weight(ExpVec{0, 2, 0}) == 2);   // u^2
}

TEST_CASE("jacobi bracket hand values") {
  ContactModel cm(2);
  Poly x = Poly::variable(3, cm.x_index(0));
  Poly u = Poly::variable(3, cm.u_index());
  Poly p = Poly::variable(3, cm.p_index(0));

  CHECK(cm.jacobi_bracket(x, p) == Poly::constant(3, 1));  // the central direction
  Poly f = x * x + u;
  CHECK(cm.jacobi_bracket(f, f).is_zero());
  CHECK(cm.jacobi_bracket(u, x) == -x);

  ContactModel cm3(3);
  Poly x1 = Poly::variable(5, cm3.x_index(0));
  Poly p2 = Poly::variable(5, cm3.p_index(1));
  CHECK(cm3.jacobi_bracket(x1, p2).is_zero());  // mixed pairs commute
}

TEST_CASE("jacobi identity on random polynomials") {
  std::mt19937 rng(31337);
  for (int n : {2, 3}) {
    ContactModel cm(n);
    for (int trial = 0; trial < 10; ++trial) {
      Poly f = random_homogeneous(cm, trial % 3 - 1, rng);
      Poly g = random_homogeneous(cm, trial % 2, rng);
      Poly h = random_homogeneous(cm, 1, rng);
      Poly jac = cm.jacobi_bracket(cm.jacobi_bracket(f, g), h) +
                 cm.jacobi_bracket(cm.jacobi_bracket(g, h), f) +
                 cm.jacobi_bracket(cm.jacobi_bracket(h, f), g);
      CHECK(jac.is_zero());
    }
  }
}

TEST_CASE("weight additivity of the jacobi bracket") {
  std::mt19937 rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    ContactModel cm(trial % 2 ? 2 : 3);
    int wf = trial % 4 - 2, wg = (trial / 2) % 3;
    Poly f = random_homogeneous(cm, wf, rng);
    Poly g = random_homogeneous(cm, wg, rng);
    Poly br = cm.jacobi_bracket(f, g);
    if (br.is_zero()) continue;
    auto w = cm.homogeneous_weight(br);
    REQUIRE(w.has_value());
    CHECK(*w == wf + wg);
  }
}

TEST_CASE("contact component dimensions and listing order") {
  auto c0 = contact_component(2, 0);
  CHECK(c0.size() == 4);
  ContactModel cm(2);
  // u first, then x^2, xp, p^2
  CHECK(cm.monomial_name(c0[0]) == "u");
  CHECK(cm.monomial_name(c0[1]) == "x1^2");
  CHECK(cm.monomial_name(c0[2]) == "x1*p1");
  CHECK(cm.monomial_name(c0[3]) == "p1^2");
  CHECK(contact_component(2, 1).size() == 6);
  CHECK(contact_component(2, 2).size() == 9);
  CHECK(contact_component(2, 3).size() == 12);
  CHECK(contact_component(3, 0).size() == 11);
  CHECK(contact_component(3, 1).size() == 24);
}

TEST_CASE("decomposition of the weight-1 component") {
  ContactModel cm2(2);
  auto split2 = decompose_g1_contact(cm2);
  CHECK(split2.w_part.dim() == 2);
  CHECK(split2.s3w_part.dim() == 4);
  CHECK(split2.w_part.dim() + split2.s3w_part.dim() == contact_component(2, 1).size());
  CHECK(intersect(split2.w_part, split2.s3w_part).dim() == 0);

  ContactModel cm3(3);
  auto split3 = decompose_g1_contact(cm3);
  CHECK(split3.w_part.dim() == 4);
  CHECK(split3.s3w_part.dim() == 20);
}

TEST_CASE("projective decomposition and the contraction identity") {
  for (int n : {2, 3}) {
    VectorFieldModel vm(n);
    auto split = decompose_g1_projective(n);
    std::size_t total = vm.tensor_dim(2);
    CHECK(split.ker_q.dim() + split.embedded.dim() == total);
    CHECK(split.embedded.dim() == static_cast<std::size_t>(n));
    CHECK(intersect(split.ker_q, split.embedded).dim() == 0);
    // q(i(p)) = (n+1) p: the radial field y_j E contracts to (n+1) y_j
    Matrix q = vm.divergence_matrix(1);
    auto deg1 = vm.monomials(1);
    for (int j = 0; j < n; ++j) {
      std::vector<Poly> field(n, Poly(n));
      for (int l = 0; l < n; ++l)
        field[l] = Poly::variable(n, j) * Poly::variable(n, l);
      Vec coords = vm.tensor_coords(field, 1);
      Vec img(q.rows());
      for (std::size_t r = 0; r < q.rows(); ++r) {
        Rat acc = 0;
        for (std::size_t c = 0; c < q.cols(); ++c) acc += q(r, c) * coords[c];
        img[r] = acc;
      }
      for (std::size_t r = 0; r < deg1.size(); ++r) {
        ExpVec ej(n, 0);
        ej[j] = 1;
        CHECK(img[r] == (deg1[r] == ej ? Rat(n + 1) : Rat(0)));
      }
    }
  }
  CHECK(decompose_g1_projective(2).ker_q.dim() == 4);
  CHECK(decompose_g1_projective(2).embedded.dim() == 2);
  CHECK(decompose_g1_projective(3).ker_q.dim() == 15);
  CHECK(decompose_g1_projective(3).embedded.dim() == 3);
}

TEST_CASE("divergence kernel dimensions match the binomial formula") {
  auto binom = [](int a, int b) {
    Int num = 1, den = 1;
    for (int i = 0; i < b; ++i) {
      num *= a - i;
      den *= i + 1;
    }
    return num / den;
  };
  for (int n = 1; n <= 3; ++n)
    for (int k = 1; k <= 3; ++k) {
      Int expected = Int(n) * binom(n + k, k + 1) - binom(n + k - 1, k);
      CHECK(Int(divergence_kernel_component(n, k).dim()) == expected);
    }
  CHECK(divergence_kernel_component(1, 1).dim() == 0);
  CHECK(divergence_kernel_component(1, 3).dim() == 0);
  CHECK(divergence_kernel_component(2, 1).dim() == 4);
  CHECK(divergence_kernel_component(2, 2).dim() == 5);
  CHECK(divergence_kernel_component(2, 3).dim() == 6);
}

TEST_CASE("lagrangian g0 hamiltonians") {
  for (int n : {2, 3}) {
    ContactModel cm(n);
    auto hams = lagrangian_contact_g0(cm);
    CHECK(hams.size() == 1 + cm.d() * cm.d());
    // closed under the jacobi bracket
    std::vector<Vec> rows;
    auto monos = cm.component_monomials(0);
    auto coords_of = [&](const Poly& h) {
      Vec v(monos.size());
      for (std::size_t i = 0; i < monos.size(); ++i) v[i] = h.coeff(monos[i]);
      return v;
    };
    for (const Poly& h : hams) rows.push_back(coords_of(h));
    Subspace span = Subspace::span_of_rows(rows, monos.size());
    for (const Poly& a : hams)
      for (const Poly& b : hams) {
        Poly br = cm.jacobi_bracket(a, b);
        if (!br.is_zero()) CHECK(span.contains(coords_of(br)));
      }
  }
}

TEST_CASE("abelian subalgebras S2V and S2V* of the weight-0 component") {
  ContactModel cm(3);
  std::vector<Poly> s2v, s2vstar;
  for (std::size_t i = 0; i < cm.d(); ++i)
    for (std::size_t j = i; j < cm.d(); ++j) {
      s2v.push_back(Poly::variable(cm.nvars(), cm.x_index(i)) *
                    Poly::variable(cm.nvars(), cm.x_index(j)));
      s2vstar.push_back(Poly::variable(cm.nvars(), cm.p_index(i)) *
                        Poly::variable(cm.nvars(), cm.p_index(j)));
    }
  for (const auto& list : {s2v, s2vstar})
    for (const Poly& a : list)
      for (const Poly& b : list) CHECK(cm.jacobi_bracket(a, b).is_zero());
}

TEST_CASE("the negative part of the contact algebra is the Heisenberg algebra") {
  for (int n : {2, 3}) {
    ContactModel cm(n);
    Gnla neg = cm.negative_part();
    Gnla heis = Gnla::heisenberg(n - 1);
    CHECK(neg.depth() == heis.depth());
    CHECK(neg.dim(-1) == heis.dim(-1));
    CHECK(neg.dim(-2) == heis.dim(-2));
    for (std::size_t a = 0; a < neg.dim(-1); ++a)
      for (std::size_t b = 0; b < neg.dim(-1); ++b)
        CHECK(neg.bracket_basis(-1, a, -1, b) == heis.bracket_basis(-1, a, -1, b));
  }
}

TEST_CASE("contact components are a full oracle for the heisenberg prolongation") {
  // dimensions agree AND every monomial encodes into the computed component,
  // so the spans coincide
  ContactModel cm(2);
  Gnla heis = Gnla::heisenberg(1);
  ProlongedAlgebra st(heis);
  for (int k = 0; k <= 3; ++k) st.advance();
  CHECK(st.dim_at(0) == der0(heis).space.dim());
  for (int k = 0; k <= 3; ++k) {
    auto monos = cm.component_monomials(k);
    CHECK(st.dim_at(k) == monos.size());
    std::vector<Poly> hams;
    for (const auto& e : monos) hams.push_back(cm.monomial(e));
    Subspace span = encode_contact_span(cm, st, hams, k);
    CHECK(span == st.component(k).space);
  }
}

TEST_CASE("divergence-free tower agrees with the reduced prolongation componentwise") {
  for (int n : {2, 3}) {
    Gnla ab = Gnla::abelian(n);
    VectorFieldModel vm(n);
    auto st = prolong(ab, std::nullopt, {ReductionSpec::divergence_free(1)}, 3);
    for (int k = 1; k <= 3; ++k) {
      Subspace flat = vm.divergence_kernel_component(k);
      CHECK(flat.dim() == st.dim_at(k));
      Subspace encoded = vm.encode_tensor_span(st, flat, k);
      CHECK(encoded == st.component(k).space);
    }
  }
}

TEST_CASE("low-dimensional reduction towers share their positive components") {
  // at n = 2 the cubic-part reduction of the contact tower and the
  // divergence-free tower have equal dimensions in every degree >= -1; the
  // contact side carries one extra dimension at degree -2
  ContactModel cm(2);
  Gnla heis = Gnla::heisenberg(1);
  ProlongedAlgebra pre(heis);
  pre.advance();
  pre.advance();
  ContactG1Split split = decompose_g1_contact(cm);
  std::vector<Poly> s3whams;
  for (const auto& e : split.s3w_monomials) s3whams.push_back(cm.monomial(e));
  Subspace s3w = encode_contact_span(cm, pre, s3whams, 1);
  auto contact_tower = prolong(heis, std::nullopt, {ReductionSpec::custom(1, s3w)}, 3);
  auto sd_tower = prolong(Gnla::abelian(2), std::nullopt,
                          {ReductionSpec::divergence_free(1)}, 3);
  CHECK(contact_tower.base().dim(-1) == sd_tower.base().dim(-1));
  CHECK(contact_tower.base().dim(-2) == sd_tower.base().dim(-2) + 1);
  for (int k = 0; k <= 3; ++k) CHECK(contact_tower.dim_at(k) == sd_tower.dim_at(k));
}
