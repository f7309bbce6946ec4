#pragma once

#include "tanaka/distribution.hpp"
#include "tanaka/prolong.hpp"

#include <map>
#include <string>
#include <vector>

namespace tanaka {

/// Flat graded coordinate model: coordinates carry integer weights dual to
/// the grading, the distribution frame is weight-homogeneous of weighted
/// degree -1 with an identity block on the weight-1 coordinates, and the
/// algebra at the origin is the stored prolongation of the extracted base.
class GradedModel {
public:
  GradedModel(std::vector<std::string> coords, std::vector<int> weights,
              std::vector<PolyVectorField> frame, const std::optional<Subspace>& g0,
              const std::vector<ReductionSpec>& reductions, int cap)
      : coords_(std::move(coords)), weights_(std::move(weights)), frame_(std::move(frame)),
        cap_(cap), algebra_(build_algebra(g0, reductions, cap)) {}

  const std::vector<std::string>& coords() const { return coords_; }
  const std::vector<int>& weights() const { return weights_; }
  const std::vector<PolyVectorField>& frame() const { return frame_; }
  const Gnla& gnla() const { return algebra_.base(); }
  const ProlongedAlgebra& algebra() const { return algebra_; }
  const AdaptedFrame& adapted() const { return adapted_; }
  /// Weight-(-1) homogeneous symmetries R_a with origin class e_a; the
  /// negative realization of g_{-1} inside the symmetry sheaf.
  const std::vector<PolyVectorField>& realization() const { return realization_; }
  int depth() const { return algebra_.base().depth(); }
  int cap() const { return cap_; }
  std::size_t ncoords() const { return coords_.size(); }

  /// Weighted degree of one coefficient term sitting over a coordinate
  /// direction: monomial weight minus target-coordinate weight.
  int term_weight(const ExpVec& e, std::size_t coord) const {
    int w = -weights_[coord];
    for (std::size_t i = 0; i < e.size(); ++i) w += static_cast<int>(e[i]) * weights_[i];
    return w;
  }

  /// Decomposition into weighted-homogeneous parts.
  std::map<int, PolyVectorField> weighted_parts(const PolyVectorField& x) const {
    std::map<int, PolyVectorField> parts;
    for (std::size_t c = 0; c < ncoords(); ++c)
      for (const auto& [e, cf] : x.comp[c].terms()) {
        int w = term_weight(e, c);
        auto it = parts.find(w);
        if (it == parts.end())
          it = parts.emplace(w, PolyVectorField::zero(ncoords())).first;
        it->second.comp[c].add_term(e, cf);
      }
    return parts;
  }

private:
  ProlongedAlgebra build_algebra(const std::optional<Subspace>& g0,
                                 const std::vector<ReductionSpec>& reductions, int cap) {
    if (weights_.size() != coords_.size())
      throw std::invalid_argument("graded model: weight count mismatch");
    std::size_t m = frame_.size();
    if (m == 0 || m > coords_.size())
      throw std::invalid_argument("graded model: bad frame size");
    for (std::size_t b = 0; b < m; ++b)
      if (weights_[b] != 1)
        throw math_error("graded model: the first " + std::to_string(m) +
                         " coordinates must have weight 1");
    // Cramer-solvable frame: identity block over the weight-1 coordinates
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        Poly expect = a == b ? Poly::constant(ncoords(), 1) : Poly(ncoords());
        if (frame_[a].comp[b] != expect)
          throw math_error(
              "graded model: frame is not Cramer-solvable (no identity block over the "
              "weight-1 coordinates)");
      }
    // frame fields must be weight-homogeneous of weighted degree -1
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t c = 0; c < ncoords(); ++c)
        for (const auto& [e, cf] : frame_[a].comp[c].terms())
          if (term_weight(e, c) != -1)
            throw math_error("graded model: frame field " + std::to_string(a + 1) +
                             " is not weight-homogeneous of degree -1");
    int max_w = 0;
    for (int w : weights_) max_w = std::max(max_w, w);
    Flag flag = derived_flag(frame_, coords_, static_cast<std::size_t>(max_w) + 1);
    auto [g, adapted] = gnla_at(flag, Vec(ncoords()));
    adapted_ = std::move(adapted);
    // the adapted frame step of each coordinate direction must match the
    // declared weight, so that grading and filtration agree at the origin
    for (std::size_t i = 0; i < ncoords(); ++i) {
      Vec unit(ncoords());
      unit[i] = 1;
      // locate the filtration level of the coordinate direction
      std::size_t level = 0;
      for (std::size_t s = 1; s <= adapted_.steps.back(); ++s) {
        std::vector<Vec> rows;
        for (std::size_t r = 0; r < adapted_.fields.size(); ++r)
          if (adapted_.steps[r] <= s) rows.push_back(adapted_.eval.row(r));
        rows.push_back(unit);
        if (Subspace::span_of_rows(rows, ncoords()).dim() == rows.size() - 1) {
          level = s;
          break;
        }
      }
      if (level != static_cast<std::size_t>(weights_[i]))
        throw math_error("graded model: coordinate " + coords_[i] +
                         " has weight " + std::to_string(weights_[i]) +
                         " but filtration level " + std::to_string(level));
    }
    build_realization();
    return prolong(g, g0, reductions, cap);
  }

  void enumerate_weighted(ExpVec& cur, std::size_t pos, int remaining,
                          std::vector<ExpVec>& out) const {
    if (pos == cur.size()) {
      if (remaining == 0) out.push_back(cur);
      return;
    }
    for (int k = 0; k * weights_[pos] <= remaining; ++k) {
      cur[pos] = static_cast<std::uint32_t>(k);
      enumerate_weighted(cur, pos + 1, remaining - k * weights_[pos], out);
    }
    cur[pos] = 0;
  }

  /// Solves for the weight-(-1) homogeneous symmetry fields and fixes the
  /// basis by origin classes. Their span realizes g_{-1} inside the symmetry
  /// sheaf of the flat model.
  void build_realization() {
    std::size_t m = frame_.size();
    // candidate coefficient slots (coordinate, monomial) of term weight -1
    std::vector<std::pair<std::size_t, ExpVec>> slots;
    for (std::size_t c = 0; c < ncoords(); ++c) {
      std::vector<ExpVec> monos;
      ExpVec cur(ncoords(), 0);
      enumerate_weighted(cur, 0, weights_[c] - 1, monos);
      for (ExpVec& e : monos) slots.push_back({c, e});
    }
    auto candidate = [&](std::size_t s) {
      PolyVectorField f = PolyVectorField::zero(ncoords());
      f.comp[slots[s].first].add_term(slots[s].second, 1);
      return f;
    };
    // residual of the symmetry condition is linear in the field
    std::map<std::pair<std::size_t, std::pair<std::size_t, ExpVec>>, std::size_t> rows;
    std::vector<std::map<std::size_t, Rat>> cols(slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s) {
      PolyVectorField x = candidate(s);
      for (std::size_t a = 0; a < m; ++a) {
        PolyVectorField br = lie_bracket(x, frame_[a]);
        PolyVectorField residual = br;
        for (std::size_t b = 0; b < m; ++b) {
          const Poly& coeff = br.comp[b];
          if (!coeff.is_zero()) residual = residual - coeff * frame_[b];
        }
        for (std::size_t c = 0; c < ncoords(); ++c)
          for (const auto& [e, cf] : residual.comp[c].terms()) {
            auto key = std::make_pair(a, std::make_pair(c, e));
            auto it = rows.find(key);
            if (it == rows.end()) it = rows.emplace(key, rows.size()).first;
            cols[s][it->second] += cf;
          }
      }
    }
    Matrix sys(rows.size(), slots.size());
    for (std::size_t s = 0; s < slots.size(); ++s)
      for (const auto& [r, cf] : cols[s]) sys(r, s) = cf;
    Subspace ker = kernel_basis(sys);
    if (ker.dim() != m)
      throw math_error("graded model: weight-(-1) symmetry space has dimension " +
                       std::to_string(ker.dim()) + ", expected " + std::to_string(m));
    // origin class of a weight-(-1) field sits on the weight-1 coordinates
    Matrix classes(ker.dim(), m);
    for (std::size_t r = 0; r < ker.dim(); ++r) {
      Vec coords = ker.basis().row(r);
      PolyVectorField f = PolyVectorField::zero(ncoords());
      for (std::size_t s = 0; s < slots.size(); ++s)
        if (coords[s] != 0) f.comp[slots[s].first].add_term(slots[s].second, coords[s]);
      Vec v = f.eval(Vec(ncoords()));
      for (std::size_t a = 0; a < m; ++a) classes(r, a) = v[a];
    }
    // combos of kernel rows matching each unit class: solve classes^T c = e_a
    Matrix solve(m, ker.dim() + m);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t r = 0; r < ker.dim(); ++r) solve(a, r) = classes(r, a);
      solve(a, ker.dim() + a) = 1;
    }
    RrefResult rr = rref(solve);
    realization_.clear();
    for (std::size_t a = 0; a < m; ++a) {
      Vec combo(ker.dim());
      for (std::size_t k = 0; k < rr.rank; ++k) {
        if (rr.pivot_cols[k] >= ker.dim())
          throw math_error("graded model: realization classes are degenerate");
        combo[rr.pivot_cols[k]] = rr.r(k, ker.dim() + a);
      }
      PolyVectorField f = PolyVectorField::zero(ncoords());
      for (std::size_t r = 0; r < ker.dim(); ++r) {
        if (combo[r] == 0) continue;
        Vec coords = ker.basis().row(r);
        for (std::size_t s = 0; s < slots.size(); ++s)
          if (coords[s] != 0)
            f.comp[slots[s].first].add_term(slots[s].second, combo[r] * coords[s]);
      }
      realization_.push_back(std::move(f));
    }
  }

  std::vector<std::string> coords_;
  std::vector<int> weights_;
  std::vector<PolyVectorField> frame_;
  AdaptedFrame adapted_;
  std::vector<PolyVectorField> realization_;
  int cap_;
  ProlongedAlgebra algebra_;
};

struct SymmetryCheck {
  bool ok = true;
  std::size_t frame_index = 0;         // witness on failure
  PolyVectorField residual;            // nonzero residual on failure
};

/// A field X is a symmetry iff every bracket [X, V_a] with a frame generator
/// lies in the polynomial span of the frame. Coefficients are read off the
/// identity block, the residual must vanish identically.
inline SymmetryCheck is_symmetry(const PolyVectorField& x, const GradedModel& model) {
  std::size_t m = model.frame().size();
  if (x.ncoords() != model.ncoords())
    throw std::invalid_argument("is_symmetry: coordinate count mismatch");
  SymmetryCheck out;
  for (std::size_t a = 0; a < m; ++a) {
    PolyVectorField br = lie_bracket(x, model.frame()[a]);
    PolyVectorField residual = br;
    for (std::size_t b = 0; b < m; ++b) {
      const Poly& coeff = br.comp[b];
      if (coeff.is_zero()) continue;
      residual = residual - coeff * model.frame()[b];
    }
    if (!residual.is_zero()) {
      out.ok = false;
      out.frame_index = a;
      out.residual = residual;
      return out;
    }
  }
  return out;
}

/// Largest filtration level containing X: the minimum over nonzero terms of
/// (monomial weight - target coordinate weight).
inline int weighted_order_at_origin(const PolyVectorField& x, const GradedModel& model) {
  if (x.is_zero()) throw std::invalid_argument("weighted order of the zero field");
  std::optional<int> best;
  for (std::size_t c = 0; c < x.ncoords(); ++c)
    for (const auto& [e, cf] : x.comp[c].terms()) {
      int w = model.term_weight(e, c);
      if (!best || w < *best) best = w;
    }
  return *best;
}

/// Standard (non-weighted) vanishing order: the first s with a nonzero s-jet
/// at the origin, i.e. the minimum total degree among coefficient terms.
inline int standard_jet_order(const PolyVectorField& x) {
  std::optional<std::size_t> best;
  for (const Poly& p : x.comp) {
    auto d = p.min_total_degree();
    if (d && (!best || *d < *best)) best = d;
  }
  if (!best) throw std::invalid_argument("jet order of the zero field");
  return static_cast<int>(*best);
}

namespace detail {

/// Class of a weight-homogeneous symmetry in the model algebra at its weight,
/// under the homomorphic identification that sends the grading field
/// (weighted Euler field) to the grading derivation. For negative weight this
/// is minus the origin value read through the adapted frame; for non-negative
/// weight the g_{-1} block row at e_a is the class of [R_a, X] with R_a the
/// negative realization field, identified in the computed component.
inline std::optional<Element> grade_project(const PolyVectorField& part, int w,
                                            const GradedModel& model) {
  if (w < -model.depth()) return Element{w, Vec{}};
  if (w < 0) {
    Vec v = part.eval(Vec(model.ncoords()));
    // solve through the adapted frame, keep the step -w coordinates
    const AdaptedFrame& fr = model.adapted();
    std::size_t n = model.ncoords();
    Matrix aug(n, n + 1);
    Matrix ft = fr.eval.transposed();
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) aug(r, c) = ft(r, c);
      aug(r, n) = v[r];
    }
    RrefResult rr = rref(aug);
    Vec coeff(n);
    for (std::size_t k = 0; k < rr.rank; ++k) {
      if (rr.pivot_cols[k] == n) throw std::logic_error("grade_project: frame solve failed");
      coeff[rr.pivot_cols[k]] = rr.r(k, n);
    }
    Vec out(model.gnla().dim(w));
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (fr.steps[i] > static_cast<std::size_t>(-w) && coeff[i] != 0)
        return std::nullopt;  // value sticks out of the filtration level
      if (fr.steps[i] == static_cast<std::size_t>(-w)) out[idx++] = -coeff[i];
    }
    return Element{w, out};
  }
  if (w > model.algebra().computed_depth() && !model.algebra().finite_type())
    throw std::out_of_range("grade_project: weight beyond the computed cap");
  std::size_t n1 = model.gnla().dim(-1);
  Matrix block(n1, model.algebra().dim_at(w - 1));
  for (std::size_t a = 0; a < n1; ++a) {
    PolyVectorField br = lie_bracket(model.realization()[a], part);
    Vec row(block.cols());
    if (!br.is_zero()) {
      auto sub = grade_project(br, w - 1, model);
      if (!sub) return std::nullopt;
      row = sub->coords;
    }
    block.set_row(a, row);
  }
  if (model.algebra().dim_at(w) == 0)
    return block.is_zero() ? std::optional<Element>(Element{w, Vec{}}) : std::nullopt;
  return model.algebra().element_from_block(w, block);
}

}  // namespace detail

/// Symbol of a symmetry of weighted order i: the class of its weight-i
/// homogeneous part inside the model algebra component of degree i.
inline Element graded_symbol(const PolyVectorField& x, int i, const GradedModel& model) {
  if (weighted_order_at_origin(x, model) != i)
    throw std::invalid_argument("graded_symbol: order mismatch");
  auto parts = model.weighted_parts(x);
  auto it = parts.find(i);
  if (it == parts.end()) throw std::logic_error("graded_symbol: missing homogeneous part");
  auto elt = detail::grade_project(it->second, i, model);
  if (!elt)
    throw math_error("graded_symbol: symbol falls outside the computed component at degree " +
                     std::to_string(i) + " (symmetry bound violated)");
  if (vec_is_zero(elt->coords) && model.algebra().dim_at(i) > 0)
    throw math_error("graded_symbol: symbol vanishes at the leading order");
  return *elt;
}

struct DeterminacyRow {
  int order = 0;      // weighted order i >= 0
  int jet_order = 0;  // standard vanishing order s
  Rat lo, hi;         // real bounds (i+1)/nu and i+1
  int lo_int = 0, hi_int = 0;
  bool ok = false;
};

/// Admissible standard jet orders for a symmetry of weighted order i >= 0 on
/// a depth-nu model: (i+1)/nu <= s <= i+1, reported with both the real
/// endpoints and the integer range.
inline std::pair<Rat, Rat> jet_determinacy_range(int i, int nu) {
  if (i < 0 || nu < 1) throw std::invalid_argument("jet_determinacy_range: bad arguments");
  return {make_rat(i + 1, nu), Rat(i + 1)};
}

inline std::pair<int, int> jet_determinacy_range_int(int i, int nu) {
  auto [lo, hi] = jet_determinacy_range(i, nu);
  Int n = numerator(lo), d = denominator(lo);
  Int lo_int = (n + d - 1) / d;  // ceil
  return {static_cast<int>(lo_int), i + 1};
}

struct SymmetryReport {
  std::vector<std::string> field_names;
  std::vector<int> orders;                       // weighted order per input field
  std::map<int, std::size_t> filtration_dims;    // dim s_i per degree
  std::map<int, std::vector<Element>> symbols;   // symbol bases per degree
  std::map<int, std::size_t> algebra_dims;       // dim g_i at the origin per degree
  std::size_t independent = 0;
  bool per_degree_bound = true;
  bool total_bound = true;
  std::vector<DeterminacyRow> determinacy;
};

/// Weighted filtration of the span of verified symmetries: dims of the
/// graded pieces, symbol bases inside the model components, the dimension
/// bounds, and jet-determinacy rows for the non-negative orders.
inline SymmetryReport filtration_report(const std::vector<PolyVectorField>& symmetries,
                                        const GradedModel& model, int cap) {
  SymmetryReport report;
  for (std::size_t i = 0; i < symmetries.size(); ++i) {
    SymmetryCheck chk = is_symmetry(symmetries[i], model);
    if (!chk.ok)
      throw math_error("filtration_report: field #" + std::to_string(i + 1) +
                       " is not a symmetry (residual on frame generator " +
                       std::to_string(chk.frame_index + 1) + ")");
  }
  for (int d = -model.depth(); d <= cap; ++d)
    report.algebra_dims[d] = d < 0 ? model.gnla().dim(d) : model.algebra().dim_at(d);

  if (symmetries.empty()) return report;

  // coordinatize the span of the inputs
  std::map<std::pair<std::size_t, ExpVec>, std::size_t> columns;
  for (const auto& x : symmetries)
    for (std::size_t c = 0; c < x.ncoords(); ++c)
      for (const auto& [e, cf] : x.comp[c].terms())
        columns.emplace(std::make_pair(c, e), columns.size());
  std::size_t ambient = columns.size();
  auto to_vec = [&](const PolyVectorField& x) {
    Vec v(ambient);
    for (std::size_t c = 0; c < x.ncoords(); ++c)
      for (const auto& [e, cf] : x.comp[c].terms()) v[columns.at({c, e})] = cf;
    return v;
  };
  auto to_field = [&](const Vec& v) {
    PolyVectorField f = PolyVectorField::zero(model.ncoords());
    for (const auto& [key, idx] : columns)
      if (v[idx] != 0) f.comp[key.first].add_term(key.second, v[idx]);
    return f;
  };

  std::vector<Vec> rows;
  for (const auto& x : symmetries) {
    report.orders.push_back(weighted_order_at_origin(x, model));
    if (report.orders.back() > cap)
      throw std::invalid_argument("filtration_report: weighted order exceeds the cap");
    rows.push_back(to_vec(x));
  }
  Subspace span = Subspace::span_of_rows(rows, ambient);
  report.independent = span.dim();

  // filtration level j: members whose weight-(< j) parts vanish
  auto level = [&](int j) {
    std::vector<std::size_t> banned;
    for (const auto& [key, idx] : columns)
      if (model.term_weight(key.second, key.first) < j) banned.push_back(idx);
    Matrix sys(banned.size(), span.dim());
    for (std::size_t r = 0; r < banned.size(); ++r)
      for (std::size_t c = 0; c < span.dim(); ++c) sys(r, c) = span.basis()(c, banned[r]);
    Subspace ker = kernel_basis(sys);  // coordinates w.r.t. span basis
    std::vector<Vec> lv;
    for (std::size_t r = 0; r < ker.dim(); ++r) lv.push_back(span.combine(ker.basis().row(r)));
    return Subspace::span_of_rows(lv, ambient);
  };

  std::map<int, Subspace> levels;
  for (int j = -model.depth(); j <= cap + 1; ++j) levels.emplace(j, level(j));

  for (int i = -model.depth(); i <= cap; ++i) {
    const Subspace& si = levels.at(i);
    const Subspace& si1 = levels.at(i + 1);
    std::size_t dim_i = si.dim() - si1.dim();
    report.filtration_dims[i] = dim_i;
    if (dim_i == 0) continue;
    // representatives of s_i: basis vectors of level i independent mod level i+1
    Subspace acc = si1;
    std::vector<Element> symbols;
    for (std::size_t r = 0; r < si.dim() && symbols.size() < dim_i; ++r) {
      Vec v = si.basis().row(r);
      if (acc.contains(v)) continue;
      acc = sum(acc, Subspace::span_of_rows({v}, ambient));
      PolyVectorField rep = to_field(v);
      auto parts = model.weighted_parts(rep);
      auto it = parts.find(i);
      if (it == parts.end()) throw std::logic_error("filtration_report: missing leading part");
      auto sym = detail::grade_project(it->second, i, model);
      if (!sym)
        throw math_error("filtration_report: symbol at degree " + std::to_string(i) +
                         " falls outside the computed component (symmetry bound violated)");
      symbols.push_back(*sym);
    }
    // symbol independence inside g_i
    std::vector<Vec> sym_rows;
    for (const Element& s : symbols) sym_rows.push_back(s.coords);
    std::size_t sdim = report.algebra_dims.at(i) == 0
                           ? 0
                           : Subspace::span_of_rows(sym_rows, report.algebra_dims.at(i)).dim();
    if (sdim != dim_i)
      throw math_error("filtration_report: symbols at degree " + std::to_string(i) +
                       " are dependent");
    report.symbols[i] = std::move(symbols);
    if (dim_i > report.algebra_dims.at(i)) report.per_degree_bound = false;
  }

  std::size_t total_s = 0, total_g = 0;
  for (const auto& [d, n] : report.filtration_dims) total_s += n;
  for (const auto& [d, n] : report.algebra_dims) total_g += n;
  report.total_bound = total_s <= total_g;

  for (std::size_t i = 0; i < symmetries.size(); ++i) {
    if (report.orders[i] < 0) continue;
    DeterminacyRow row;
    row.order = report.orders[i];
    row.jet_order = standard_jet_order(symmetries[i]);
    auto [lo, hi] = jet_determinacy_range(row.order, model.depth());
    auto [li, hi_i] = jet_determinacy_range_int(row.order, model.depth());
    row.lo = lo;
    row.hi = hi;
    row.lo_int = li;
    row.hi_int = hi_i;
    row.ok = Rat(row.jet_order) >= lo && Rat(row.jet_order) <= hi;
    report.determinacy.push_back(row);
  }
  return report;
}

struct BracketCompat {
  bool ok = true;
  std::vector<std::string> witnesses;
};

/// Checks [s_i, g_{-1}] inside span(s_{i-1}) on the stored symbol bases.
inline BracketCompat check_bracket_compat(const SymmetryReport& report,
                                          const GradedModel& model) {
  BracketCompat out;
  std::size_t n1 = model.gnla().dim(-1);
  for (const auto& [i, symbols] : report.symbols) {
    // span of the symbols one degree down
    std::size_t down_dim = report.algebra_dims.count(i - 1) ? report.algebra_dims.at(i - 1) : 0;
    std::vector<Vec> down_rows;
    if (report.symbols.count(i - 1))
      for (const Element& s : report.symbols.at(i - 1)) down_rows.push_back(s.coords);
    Subspace down = Subspace::span_of_rows(down_rows, down_dim);
    for (std::size_t s = 0; s < symbols.size(); ++s)
      for (std::size_t a = 0; a < n1; ++a) {
        Element e = model.algebra().basis_element(-1, a);
        Element br = model.algebra().bracket(symbols[s], e);
        if (br.coords.empty() || vec_is_zero(br.coords)) continue;
        if (!down.contains(br.coords)) {
          out.ok = false;
          out.witnesses.push_back("[symbol " + std::to_string(s + 1) + " of degree " +
                                  std::to_string(i) + ", e_" + std::to_string(a + 1) +
                                  "] escapes the degree-" + std::to_string(i - 1) +
                                  " symbol span");
        }
      }
  }
  return out;
}

}  // namespace tanaka
