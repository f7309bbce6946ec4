#pragma once

#include "tanaka/flat_models.hpp"
#include "tanaka/symmetry.hpp"

#include <string>
#include <vector>

namespace tanaka {
namespace models {

inline std::vector<std::string> heisenberg_coords() { return {"x", "y", "z"}; }
inline std::vector<int> heisenberg_weights() { return {1, 1, 2}; }

/// Frame d_x, d_y + x d_z on (x, y, z).
inline std::vector<PolyVectorField> heisenberg_frame() {
  std::vector<std::string> c = heisenberg_coords();
  return {PolyVectorField::parse({"1", "0", "0"}, c),
          PolyVectorField::parse({"0", "1", "x"}, c)};
}

/// Frame d_x, d_y + x^2 d_z on (x, y, z); singular along x = 0.
inline std::vector<PolyVectorField> martinet_frame() {
  std::vector<std::string> c = heisenberg_coords();
  return {PolyVectorField::parse({"1", "0", "0"}, c),
          PolyVectorField::parse({"0", "1", "x^2"}, c)};
}

inline std::vector<std::string> coords_235() { return {"x1", "x2", "x3", "x4", "x5"}; }
inline std::vector<int> weights_235() { return {1, 1, 2, 3, 3}; }

/// Growth (2,3,5) frame d_{x1}, d_{x2} + x1 d_{x3} + x3 d_{x4} + x1^2 d_{x5}.
inline std::vector<PolyVectorField> frame_235() {
  std::vector<std::string> c = coords_235();
  return {PolyVectorField::parse({"1", "0", "0", "0", "0"}, c),
          PolyVectorField::parse({"0", "1", "x1", "x3", "x1^2"}, c)};
}

/// The (2,3,5) nilpotent approximation by explicit brackets.
inline Gnla gnla_235() {
  GnlaSpec spec;
  spec.degrees[-1] = {"e1", "e2"};
  spec.degrees[-2] = {"e3"};
  spec.degrees[-3] = {"e4", "e5"};
  spec.brackets.push_back({"e1", "e2", {{"e3", Rat(1)}}});
  spec.brackets.push_back({"e1", "e3", {{"e4", Rat(1)}}});
  spec.brackets.push_back({"e2", "e3", {{"e5", Rat(1)}}});
  return Gnla::from_spec(spec);
}

inline GradedModel heisenberg_model(int cap, const std::optional<Subspace>& g0 = std::nullopt,
                                    const std::vector<ReductionSpec>& reductions = {}) {
  return GradedModel(heisenberg_coords(), heisenberg_weights(), heisenberg_frame(), g0,
                     reductions, cap);
}

inline GradedModel model_235(int cap) {
  return GradedModel(coords_235(), weights_235(), frame_235(), std::nullopt, {}, cap);
}

/// Contact vector field of a Hamiltonian on the 3-dimensional model, written
/// in the model coordinates (x, y, z) ~ (p, x_contact, u):
///   X_h = (h_{x_c} + p h_u) d_p + (-h_p) d_{x_c} + (h - p h_p) d_u.
inline PolyVectorField contact_symmetry_field(const Poly& h) {
  ContactModel cm(2);  // variables x, u, p in that order
  if (h.nvars() != 3) throw std::invalid_argument("hamiltonian must use variables x, u, p");
  std::size_t xc = cm.x_index(0), u = cm.u_index(), p = cm.p_index(0);
  Poly hp = h.derivative(p), hu = h.derivative(u), hx = h.derivative(xc);
  Poly pvar = Poly::variable(3, p);
  Poly comp_p = hx + pvar * hu;      // coefficient of d_p
  Poly comp_x = -hp;                 // coefficient of d_{x_c}
  Poly comp_u = h - pvar * hp;       // coefficient of d_u
  // rename contact variables (x_c, u, p) -> model coordinates (y, z, x)
  std::vector<Poly> images = {Poly::variable(3, 1), Poly::variable(3, 2),
                              Poly::variable(3, 0)};
  PolyVectorField f;
  f.comp = {comp_p.substitute(images), comp_x.substitute(images), comp_u.substitute(images)};
  return f;
}

/// The eight Hamiltonians 1, x, p, u, xp, up, ux - x^2 p, u^2 - uxp generate
/// the symmetry algebra of the Lagrangian-splitting scenario, with graded
/// dimensions (1, 2 | 2, 2, 1). The two weight-1 entries are exactly the
/// Hamiltonians h with {h, x} and {h, p} inside the span of u and xp.
inline std::vector<Poly> sl3_hamiltonians() {
  ContactModel cm(2);
  std::size_t nv = cm.nvars();
  Poly x = Poly::variable(nv, cm.x_index(0));
  Poly u = Poly::variable(nv, cm.u_index());
  Poly p = Poly::variable(nv, cm.p_index(0));
  return {Poly::constant(nv, 1), x,      p,
          u,                     x * p,  u * p,
          u * x - x * x * p,     u * u - u * x * p};
}

inline std::vector<PolyVectorField> sl3_symmetry_fields() {
  std::vector<PolyVectorField> out;
  for (const Poly& h : sl3_hamiltonians()) out.push_back(contact_symmetry_field(h));
  return out;
}

/// g0 span of the Lagrangian-splitting scenario, in flattened g_{-1}-block
/// coordinates over the Heisenberg model frame: symbols of the fields of the
/// Hamiltonians u and xp.
inline Subspace sl3_g0_span() {
  GradedModel full = heisenberg_model(0);
  std::vector<Poly> hams = {sl3_hamiltonians()[3], sl3_hamiltonians()[4]};  // u, xp
  std::vector<Vec> rows;
  for (const Poly& h : hams) {
    PolyVectorField f = contact_symmetry_field(h);
    Element sym = graded_symbol(f, 0, full);
    rows.push_back(flatten_element_block(full.algebra(), sym));
  }
  return Subspace::span_of_rows(rows, full.algebra().component(0).space.ambient_dim());
}

inline GradedModel sl3_model(int cap = 3) {
  return heisenberg_model(cap, sl3_g0_span());
}

/// The so(2)-type rotation symmetry of the Heisenberg model frame: the
/// contact field of (x_c^2 + p^2)/2, in model coordinates
/// y d_x - x d_y + (y^2 - x^2)/2 d_z.
inline PolyVectorField rotation_field() {
  ContactModel cm(2);
  std::size_t nv = cm.nvars();
  Poly x = Poly::variable(nv, cm.x_index(0));
  Poly p = Poly::variable(nv, cm.p_index(0));
  return contact_symmetry_field(Rat(1, 2) * (x * x + p * p));
}

/// Weighted Euler field of a graded coordinate system.
inline PolyVectorField euler_field(const std::vector<std::string>& coords,
                                   const std::vector<int>& weights) {
  PolyVectorField f = PolyVectorField::zero(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i)
    f.comp[i] = Rat(weights[i]) * Poly::variable(coords.size(), i);
  return f;
}

}  // namespace models
}  // namespace tanaka
