#pragma once

#include "tanaka/poly.hpp"
#include "tanaka/prolong.hpp"

#include <string>
#include <vector>

namespace tanaka {

/// The contact algebra model on variables x_1..x_{n-1}, u, p_1..p_{n-1}:
/// weighted polynomials under the Jacobi bracket
///   {f,g} = f g_u + (f_{x_i} + p_i f_u) g_{p_i} - g f_u - (g_{x_i} + p_i g_u) f_{p_i}
/// with monomial weight |a| + 2(b-1) + |c| for x^a u^b p^c.
class ContactModel {
public:
  explicit ContactModel(int n) : n_(n), d_(static_cast<std::size_t>(n) - 1) {
    if (n < 2) throw std::invalid_argument("contact model needs n >= 2");
    for (std::size_t i = 1; i <= d_; ++i) vars_.push_back("x" + std::to_string(i));
    vars_.push_back("u");
    for (std::size_t i = 1; i <= d_; ++i) vars_.push_back("p" + std::to_string(i));
  }

  int n() const { return n_; }
  std::size_t d() const { return d_; }
  std::size_t nvars() const { return 2 * d_ + 1; }
  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t u_index() const { return d_; }
  std::size_t x_index(std::size_t i) const { return i; }
  std::size_t p_index(std::size_t i) const { return d_ + 1 + i; }

  int weight(const ExpVec& e) const {
    if (e.size() != nvars()) throw std::invalid_argument("exponent length mismatch");
    int w = -2;
    for (std::size_t i = 0; i < d_; ++i) w += static_cast<int>(e[i]);
    w += 2 * static_cast<int>(e[d_]);
    for (std::size_t i = 0; i < d_; ++i) w += static_cast<int>(e[d_ + 1 + i]);
    return w;
  }

  /// Weight when f is weighted-homogeneous, nullopt otherwise or for 0.
  std::optional<int> homogeneous_weight(const Poly& f) const {
    std::optional<int> w;
    for (const auto& [e, c] : f.terms()) {
      int we = weight(e);
      if (w && *w != we) return std::nullopt;
      w = we;
    }
    return w;
  }

  Poly jacobi_bracket(const Poly& f, const Poly& g) const {
    if (f.nvars() != nvars() || g.nvars() != nvars())
      throw std::invalid_argument("jacobi_bracket: variable count mismatch");
    Poly fu = f.derivative(u_index()), gu = g.derivative(u_index());
    Poly out = f * gu - g * fu;
    for (std::size_t i = 0; i < d_; ++i) {
      Poly pi = Poly::variable(nvars(), p_index(i));
      Poly fxu = f.derivative(x_index(i)) + pi * fu;
      Poly gxu = g.derivative(x_index(i)) + pi * gu;
      out += fxu * g.derivative(p_index(i)) - gxu * f.derivative(p_index(i));
    }
    return out;
  }

  /// All monomials of a given weight, ordered by total degree then
  /// reverse-lexicographically (x_1 < ... < u < p_1 < ...).
  std::vector<ExpVec> component_monomials(int k) const {
    std::vector<ExpVec> out;
    int target = k + 2;  // |a| + 2b + |c|
    for (int b = target / 2; b >= 0; --b) {
      int rest = target - 2 * b;
      if (rest < 0) continue;
      // all multi-indices over the 2d variables (x's then p's) of size `rest`
      std::vector<ExpVec> partial;
      ExpVec cur(2 * d_, 0);
      enumerate(cur, 0, rest, partial);
      for (const ExpVec& xc : partial) {
        ExpVec e(nvars(), 0);
        for (std::size_t i = 0; i < d_; ++i) e[i] = xc[i];
        e[d_] = static_cast<std::uint32_t>(b);
        for (std::size_t i = 0; i < d_; ++i) e[d_ + 1 + i] = xc[d_ + i];
        out.push_back(std::move(e));
      }
    }
    return out;
  }

  Poly monomial(const ExpVec& e) const { return Poly::monomial(nvars(), e, 1); }

  /// The nilpotent part spanned by weights -2, -1 under the Jacobi bracket;
  /// equals the Heisenberg algebra with [x_i, p_i] = z in the shipped basis.
  Gnla negative_part() const {
    GnlaSpec spec;
    auto neg1 = component_monomials(-1);
    std::vector<std::string> names1;
    for (const ExpVec& e : neg1) names1.push_back(monomial_name(e));
    spec.degrees[-1] = names1;
    spec.degrees[-2] = {monomial_name(component_monomials(-2).at(0))};
    for (std::size_t a = 0; a < neg1.size(); ++a)
      for (std::size_t b = a + 1; b < neg1.size(); ++b) {
        Poly br = jacobi_bracket(monomial(neg1[a]), monomial(neg1[b]));
        Rat c = br.coeff(ExpVec(nvars(), 0));
        if (c != 0)
          spec.brackets.push_back({names1[a], names1[b], {{"1", c}}});
      }
    return Gnla::from_spec(spec);
  }

  std::string monomial_name(const ExpVec& e) const {
    std::string s;
    for (std::size_t i = 0; i < nvars(); ++i) {
      if (e[i] == 0) continue;
      if (!s.empty()) s += "*";
      s += vars_[i];
      if (e[i] > 1) s += "^" + std::to_string(e[i]);
    }
    return s.empty() ? "1" : s;
  }

private:
  static void enumerate(ExpVec& cur, std::size_t pos, int remaining,
                        std::vector<ExpVec>& out) {
    if (pos + 1 == cur.size()) {
      cur[pos] = static_cast<std::uint32_t>(remaining);
      out.push_back(cur);
      cur[pos] = 0;
      return;
    }
    for (int take = remaining; take >= 0; --take) {
      cur[pos] = static_cast<std::uint32_t>(take);
      enumerate(cur, pos + 1, remaining - take, out);
    }
    cur[pos] = 0;
  }

  int n_;
  std::size_t d_;
  std::vector<std::string> vars_;
};

inline std::vector<ExpVec> contact_component(int n, int k) {
  return ContactModel(n).component_monomials(k);
}

/// Splitting of the weight-1 component into the u-linear part (the symplectic
/// space W) and the cubic part S^3 W.
struct ContactG1Split {
  std::vector<ExpVec> w_monomials, s3w_monomials;
  Subspace w_part, s3w_part;  // in coordinates of component_monomials(1)
};

inline ContactG1Split decompose_g1_contact(const ContactModel& model) {
  ContactG1Split split;
  auto monos = model.component_monomials(1);
  std::vector<Vec> wrows, srows;
  for (std::size_t i = 0; i < monos.size(); ++i) {
    Vec unit(monos.size());
    unit[i] = 1;
    if (monos[i][model.u_index()] > 0) {
      split.w_monomials.push_back(monos[i]);
      wrows.push_back(unit);
    } else {
      split.s3w_monomials.push_back(monos[i]);
      srows.push_back(unit);
    }
  }
  split.w_part = Subspace::span_of_rows(wrows, monos.size());
  split.s3w_part = Subspace::span_of_rows(srows, monos.size());
  return split;
}

/// Hamiltonians u and x_i p_j spanning the Lagrangian-splitting subalgebra
/// R + V (x) V* of the weight-0 component.
inline std::vector<Poly> lagrangian_contact_g0(const ContactModel& model) {
  std::vector<Poly> out;
  out.push_back(Poly::variable(model.nvars(), model.u_index()));
  for (std::size_t i = 0; i < model.d(); ++i)
    for (std::size_t j = 0; j < model.d(); ++j)
      out.push_back(Poly::variable(model.nvars(), model.x_index(i)) *
                    Poly::variable(model.nvars(), model.p_index(j)));
  return out;
}

/// Flattened g_{-1} block of an element of a non-negative component.
inline Vec flatten_element_block(const ProlongedAlgebra& state, const Element& e) {
  if (e.degree < 0) throw std::invalid_argument("negative-degree elements have no block");
  std::size_t n1 = state.base().dim(-1);
  Matrix block(n1, state.dim_at(e.degree - 1));
  for (std::size_t t = 0; t < n1; ++t) {
    Vec et(n1);
    et[t] = 1;
    block.set_row(t, state.apply(e, -1, et));
  }
  return block.flatten();
}

/// Encodes a weighted-homogeneous contact Hamiltonian as an element of the
/// prolonged algebra over the matching Heisenberg base: for weight k >= 0 the
/// g_{-1} block row at e_a is the encoding of {h, m_a}. Returns nullopt when
/// the induced map falls outside the computed component.
inline std::optional<Element> encode_contact_hamiltonian(const ContactModel& model,
                                                         const ProlongedAlgebra& state,
                                                         const Poly& h) {
  auto w = model.homogeneous_weight(h);
  if (!w) throw std::invalid_argument("hamiltonian must be nonzero and weighted-homogeneous");
  if (state.base().dim(-1) != 2 * model.d() || state.base().depth() != 2)
    throw std::invalid_argument("state base does not match the contact model");
  int k = *w;
  if (k < -2) throw std::invalid_argument("weight below the depth");
  if (k == -2) {
    Vec coords(1);
    coords[0] = h.coeff(ExpVec(model.nvars(), 0));
    return Element{-2, coords};
  }
  if (k == -1) {
    Vec coords(2 * model.d());
    auto monos = model.component_monomials(-1);
    for (std::size_t i = 0; i < monos.size(); ++i) coords[i] = h.coeff(monos[i]);
    return Element{-1, coords};
  }
  auto neg1 = model.component_monomials(-1);
  Matrix block(neg1.size(), state.dim_at(k - 1));
  for (std::size_t a = 0; a < neg1.size(); ++a) {
    Poly bra = model.jacobi_bracket(h, model.monomial(neg1[a]));
    Vec row(block.cols());
    if (!bra.is_zero()) {
      auto sub = encode_contact_hamiltonian(model, state, bra);
      if (!sub) return std::nullopt;
      row = sub->coords;
    }
    block.set_row(a, row);
  }
  return state.element_from_block(k, block);
}

/// Span of encoded Hamiltonians inside the degree-k component, in the
/// component's flattened g_{-1}-block coordinates.
inline Subspace encode_contact_span(const ContactModel& model, const ProlongedAlgebra& state,
                                    const std::vector<Poly>& hams, int k) {
  std::vector<Vec> rows;
  for (const Poly& h : hams) {
    auto elt = encode_contact_hamiltonian(model, state, h);
    if (!elt) throw math_error("hamiltonian does not encode into the computed component");
    if (elt->degree != k) throw std::invalid_argument("hamiltonian weight mismatch");
    rows.push_back(flatten_element_block(state, *elt));
  }
  return Subspace::span_of_rows(rows, state.component(k).space.ambient_dim());
}

/// The formal vector-field model on R^n: S^{k+1}V* (x) V realized as
/// homogeneous polynomial vector fields of coefficient degree k+1, in the
/// basis (monomial, coordinate direction).
class VectorFieldModel {
public:
  explicit VectorFieldModel(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("vector-field model needs n >= 1");
    for (int i = 1; i <= n; ++i) vars_.push_back("y" + std::to_string(i));
  }

  int n() const { return n_; }
  const std::vector<std::string>& vars() const { return vars_; }

  /// Monomials of a fixed total degree, reverse-lex within the degree.
  std::vector<ExpVec> monomials(int deg) const {
    std::vector<ExpVec> out;
    ExpVec cur(n_, 0);
    enumerate(cur, 0, deg, out);
    return out;
  }

  /// Basis size of S^{deg}V* (x) V is |monomials(deg)| * n.
  std::size_t tensor_dim(int deg) const { return monomials(deg).size() * n_; }

  /// Divergence map S^{k+1}V* (x) V -> S^k V* in the monomial bases:
  /// the field x^m d_j has divergence m_j x^{m - e_j}.
  Matrix divergence_matrix(int k) const {
    auto src = monomials(k + 1);
    auto dst = monomials(k);
    std::map<ExpVec, std::size_t> dst_index;
    for (std::size_t i = 0; i < dst.size(); ++i) dst_index[dst[i]] = i;
    Matrix q(dst.size(), src.size() * n_);
    for (std::size_t s = 0; s < src.size(); ++s)
      for (int j = 0; j < n_; ++j) {
        if (src[s][j] == 0) continue;
        ExpVec e = src[s];
        --e[j];
        q(dst_index.at(e), s * n_ + j) = src[s][j];
      }
    return q;
  }

  Subspace divergence_kernel_component(int k) const {
    if (k < 1) throw std::invalid_argument("divergence kernel defined for k >= 1");
    return kernel_basis(divergence_matrix(k));
  }

  /// Fields p(y) * E for linear p, with E the radial field; their span is the
  /// symmetrized embedding of V* into S^2 V* (x) V.
  Subspace radial_embedding() const {
    auto src = monomials(2);
    std::map<ExpVec, std::size_t> index;
    for (std::size_t i = 0; i < src.size(); ++i) index[src[i]] = i;
    std::vector<Vec> rows;
    for (int j = 0; j < n_; ++j) {
      Vec row(src.size() * n_);
      for (int l = 0; l < n_; ++l) {
        ExpVec e(n_, 0);
        ++e[j];
        ++e[l];
        row[index.at(e) * n_ + l] += 1;
      }
      rows.push_back(std::move(row));
    }
    return Subspace::span_of_rows(rows, src.size() * n_);
  }

  /// Tensor coordinates of a homogeneous degree-(k+1) polynomial field.
  Vec tensor_coords(const std::vector<Poly>& field, int k) const {
    auto src = monomials(k + 1);
    std::map<ExpVec, std::size_t> index;
    for (std::size_t i = 0; i < src.size(); ++i) index[src[i]] = i;
    Vec out(src.size() * n_);
    for (int j = 0; j < n_; ++j)
      for (const auto& [e, c] : field[j].terms()) out.at(index.at(e) * n_ + j) = c;
    return out;
  }

  std::vector<Poly> field_from_tensor(const Vec& coords, int k) const {
    auto src = monomials(k + 1);
    std::vector<Poly> field(n_, Poly(n_));
    for (std::size_t s = 0; s < src.size(); ++s)
      for (int j = 0; j < n_; ++j)
        if (coords.at(s * n_ + j) != 0)
          field[j] += Poly::monomial(n_, src[s], coords[s * n_ + j]);
    return field;
  }

  /// Encodes a homogeneous degree-(k+1) field as a degree-k element of the
  /// prolongation of the abelian base: block row a is the encoding of
  /// [field, d_a]. Degree-0 fields encode as the matrix of -d_a(field).
  std::optional<Element> encode_field(const ProlongedAlgebra& state,
                                      const std::vector<Poly>& field, int k) const {
    if (state.base().depth() != 1 || state.base().dim(-1) != static_cast<std::size_t>(n_))
      throw std::invalid_argument("state base does not match the vector-field model");
    if (k == -1) {
      Vec coords(n_);
      for (int j = 0; j < n_; ++j) coords[j] = field[j].coeff(ExpVec(n_, 0));
      return Element{-1, coords};
    }
    Matrix block(n_, state.dim_at(k - 1));
    for (int a = 0; a < n_; ++a) {
      // [field, d_a] = -d_a(field)
      std::vector<Poly> br;
      for (int j = 0; j < n_; ++j) br.push_back(-(field[j].derivative(a)));
      auto sub = encode_field(state, br, k - 1);
      if (!sub) return std::nullopt;
      block.set_row(a, sub->coords);
    }
    return state.element_from_block(k, block);
  }

  Subspace encode_tensor_span(const ProlongedAlgebra& state, const Subspace& tensor_span,
                              int k) const {
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < tensor_span.dim(); ++r) {
      auto elt = encode_field(state, field_from_tensor(tensor_span.basis().row(r), k), k);
      if (!elt) throw math_error("field does not encode into the computed component");
      rows.push_back(flatten_element_block(state, *elt));
    }
    return Subspace::span_of_rows(rows, state.component(k).space.ambient_dim());
  }

private:
  static void enumerate(ExpVec& cur, std::size_t pos, int remaining,
                        std::vector<ExpVec>& out) {
    if (pos + 1 == cur.size()) {
      cur[pos] = static_cast<std::uint32_t>(remaining);
      out.push_back(cur);
      cur[pos] = 0;
      return;
    }
    for (int take = remaining; take >= 0; --take) {
      cur[pos] = static_cast<std::uint32_t>(take);
      enumerate(cur, pos + 1, remaining - take, out);
    }
    cur[pos] = 0;
  }

  int n_;
  std::vector<std::string> vars_;
};

struct ProjectiveG1Split {
  Subspace ker_q;     // trace-free part of S^2 V* (x) V
  Subspace embedded;  // image of V* under the symmetrized embedding
};

inline ProjectiveG1Split decompose_g1_projective(int n) {
  VectorFieldModel model(n);
  ProjectiveG1Split out;
  out.ker_q = kernel_basis(model.divergence_matrix(1));
  out.embedded = model.radial_embedding();
  return out;
}

inline Subspace divergence_kernel_component(int n, int k) {
  return VectorFieldModel(n).divergence_kernel_component(k);
}

}  // namespace tanaka
