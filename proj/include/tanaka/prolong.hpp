#pragma once

#include "tanaka/gnla.hpp"

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace tanaka {

/// Homogeneous element of the prolonged algebra. For degree < 0 the
/// coordinates refer to the base algebra basis, for degree >= 0 to the
/// canonical basis of the computed component of that degree.
struct Element {
  int degree = 0;
  Vec coords;
};

struct ReductionSpec {
  enum class Kind { orthogonal, conformal, complex_structure, divergence_free, custom };

  int degree = 0;
  Kind kind = Kind::custom;
  Matrix form;    // orthogonal/conformal: symmetric bilinear form; complex: J
  Subspace span;  // custom: explicit span inside the component

  static ReductionSpec orthogonal(Matrix g) { return {0, Kind::orthogonal, std::move(g), {}}; }
  static ReductionSpec conformal(Matrix g) { return {0, Kind::conformal, std::move(g), {}}; }
  static ReductionSpec complex_structure(Matrix j) {
    return {0, Kind::complex_structure, std::move(j), {}};
  }
  static ReductionSpec divergence_free(int degree) {
    return {degree, Kind::divergence_free, {}, {}};
  }
  static ReductionSpec custom(int degree, Subspace span) {
    return {degree, Kind::custom, {}, std::move(span)};
  }

  std::string kind_name() const {
    switch (kind) {
      case Kind::orthogonal: return "orthogonal";
      case Kind::conformal: return "conformal";
      case Kind::complex_structure: return "complex";
      case Kind::divergence_free: return "divergence-free";
      case Kind::custom: return "custom";
    }
    return "?";
  }
};

struct ReductionRecord {
  int degree = 0;
  std::string kind;
  std::size_t dim_before = 0, dim_after = 0;
  bool g0_invariant = true;  // audited for degree >= 1, reported but never enforced
  std::string note;
};

struct DimsTable {
  std::vector<std::pair<int, std::size_t>> by_degree;  // ascending degree
  std::size_t total = 0;
  std::optional<int> kappa;  // first exactly-zero component (finite type certificate)
  bool truncated = false;

  std::string str() const {
    std::ostringstream os;
    os << "degree:";
    for (const auto& [d, n] : by_degree) os << "  " << d << ":" << n;
    os << "\ntotal: " << total << "\n";
    if (kappa)
      os << "finite type: component " << *kappa << " vanishes\n";
    else
      os << "truncated (finite type inconclusive)\n";
    return os.str();
  }
};

/// Worker threads for constraint assembly; TANAKA_THREADS overrides.
inline unsigned solver_threads() {
  if (const char* env = std::getenv("TANAKA_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1 && v <= 256) return static_cast<unsigned>(v);
  }
  return 1;
}

namespace detail {

template <class Fn>
inline void run_parallel(std::size_t n, unsigned threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    fn(std::size_t{0}, n);
    return;
  }
  std::size_t use = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  std::size_t chunk = (n + use - 1) / use;
  for (std::size_t t = 0; t < use; ++t) {
    std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// Tanaka prolongation state: the base algebra in negative degrees plus the
/// successively computed non-negative components. Component k is stored as a
/// canonical subspace of the maps g_{-1} -> (component at k-1), flattened
/// row-major, together with reconstructed blocks on every deeper source
/// degree. Every element is uniquely determined by its g_{-1} block because
/// the base is fundamental.
class ProlongedAlgebra {
public:
  struct Chain {
    // blocks[s-1]: matrix dim g_{-s} x dim_at(k-s); row r = image of basis r
    std::vector<Matrix> blocks;
  };

  struct Component {
    int degree = 0;
    Subspace space;  // ambient: dim g_{-1} * dim_at(degree-1)
    std::vector<Chain> basis;
  };

  explicit ProlongedAlgebra(Gnla base, unsigned threads = solver_threads())
      : base_(std::move(base)), threads_(threads ? threads : 1) {
    if (base_.dim(-1) == 0) throw math_error("degree -1 component must be non-empty");
    if (!check_fundamental(base_))
      throw math_error("base algebra is not fundamental: g_{-1} does not generate");
    build_expressions();
  }

  const Gnla& base() const { return base_; }
  int computed_depth() const { return static_cast<int>(comps_.size()) - 1; }
  std::optional<int> finite_type() const { return finite_type_; }
  const std::vector<ReductionRecord>& reductions() const { return reductions_; }
  const Component& component(int k) const { return comps_.at(k); }

  bool degree_known(int d) const {
    return d < 0 || d <= computed_depth() || finite_type_.has_value();
  }

  std::size_t dim_at(int d) const {
    if (d < 0) return base_.dim(d);
    if (d <= computed_depth()) return comps_[d].space.dim();
    if (finite_type_) return 0;
    throw std::out_of_range("component degree " + std::to_string(d) + " not computed");
  }

  Element basis_element(int degree, std::size_t i) const {
    Element e;
    e.degree = degree;
    e.coords = Vec(dim_at(degree));
    e.coords.at(i) = 1;
    return e;
  }

  Element zero_element(int degree) const { return Element{degree, Vec(dim_at(degree))}; }

  /// Action of a non-negative element on a negative-degree vector.
  Vec apply(const Element& u, int src_degree, const Vec& x) const {
    if (u.degree < 0 || src_degree >= 0)
      throw std::invalid_argument("apply: need u of degree >= 0 acting on negative degree");
    std::size_t ns = base_.dim(src_degree);
    if (x.size() != ns) throw std::invalid_argument("apply: source coordinate mismatch");
    Vec out(dim_at(u.degree + src_degree));
    if (out.empty() || u.degree > computed_depth()) return out;  // zero beyond finite type
    const Component& comp = comps_[u.degree];
    for (std::size_t m = 0; m < u.coords.size(); ++m) {
      if (u.coords[m] == 0) continue;
      const Matrix& block = comp.basis[m].blocks[static_cast<std::size_t>(-src_degree) - 1];
      for (std::size_t r = 0; r < ns; ++r) {
        if (x[r] == 0) continue;
        Rat c = u.coords[m] * x[r];
        for (std::size_t t = 0; t < out.size(); ++t) out[t] += c * block(r, t);
      }
    }
    return out;
  }

  /// Graded Lie bracket. A bracket of two non-negative elements is identified
  /// inside the computed component through its g_{-1} block.
  Element bracket(const Element& a, const Element& b) const {
    if (a.degree < 0 && b.degree < 0)
      return Element{a.degree + b.degree,
                     base_.bracket(a.degree, a.coords, b.degree, b.coords)};
    if (a.degree >= 0 && b.degree < 0)
      return Element{a.degree + b.degree, apply(a, b.degree, b.coords)};
    if (a.degree < 0) {
      Element r = bracket(b, a);
      for (Rat& x : r.coords) x = -x;
      return r;
    }
    int d = a.degree + b.degree;
    if (!degree_known(d))
      throw std::out_of_range("bracket degree " + std::to_string(d) + " out of computed range");
    Matrix block = action_block(a, b);
    if (dim_at(d) == 0) {
      if (!block.is_zero())
        throw math_error("bracket escapes the zero component at degree " + std::to_string(d));
      return Element{d, Vec{}};
    }
    auto coords = comps_[d].space.coordinates(block.flatten());
    if (!coords)
      throw math_error("bracket of degrees " + std::to_string(a.degree) + "," +
                       std::to_string(b.degree) + " falls outside the computed component");
    return Element{d, *coords};
  }

  /// g_{-1} block of [a,b] for non-negative a, b (rows indexed by g_{-1}).
  Matrix action_block(const Element& a, const Element& b) const {
    std::size_t n1 = base_.dim(-1);
    int d = a.degree + b.degree;
    Matrix block(n1, dim_at(d - 1));
    for (std::size_t t = 0; t < n1; ++t) {
      Element et = basis_element(-1, t);
      Element abt = bracket(a, bracket(b, et));
      Element bat = bracket(b, bracket(a, et));
      block.set_row(t, vec_sub(std::move(abt.coords), bat.coords));
    }
    return block;
  }

  /// Identifies an element of component `degree` from its g_{-1} block.
  std::optional<Element> element_from_block(int degree, const Matrix& block) const {
    if (degree < 0 || degree > computed_depth())
      throw std::out_of_range("element_from_block: degree not computed");
    auto coords = comps_[degree].space.coordinates(block.flatten());
    if (!coords) return std::nullopt;
    return Element{degree, *coords};
  }

  Matrix g1_block(int degree, std::size_t basis_idx) const {
    const Component& c = comps_.at(degree);
    return Matrix::from_flat(base_.dim(-1), dim_at(degree - 1), c.space.basis().row(basis_idx));
  }

  /// Computes and stores the next component (der_0(m) when none exists yet).
  const Component& advance() {
    Component c = solve_component(static_cast<int>(comps_.size()));
    comps_.push_back(std::move(c));
    if (comps_.back().space.dim() == 0 && !finite_type_) finite_type_ = computed_depth();
    return comps_.back();
  }

  /// Computes the next component without storing it.
  Component peek_next() const { return solve_component(static_cast<int>(comps_.size())); }

  /// Intersects the frontier component with a reduction.
  void reduce(const ReductionSpec& spec);

  /// Replaces the degree-0 component by an explicitly given subalgebra
  /// (flattened g_{-1}-block coordinates). Must lie in der_0 and be closed
  /// under the commutator.
  void restrict_g0(const Subspace& g0) {
    if (computed_depth() != 0)
      throw std::logic_error("restrict_g0: degree-0 component must be the frontier");
    std::size_t n1 = base_.dim(-1);
    if (g0.ambient_dim() != n1 * n1)
      throw std::invalid_argument("restrict_g0: ambient dimension mismatch");
    if (!comps_[0].space.contains(g0))
      throw math_error("g0 is not contained in der_0 of the base algebra");
    for (std::size_t i = 0; i < g0.dim(); ++i)
      for (std::size_t j = i + 1; j < g0.dim(); ++j) {
        Matrix bi = Matrix::from_flat(n1, n1, g0.basis().row(i));
        Matrix bj = Matrix::from_flat(n1, n1, g0.basis().row(j));
        // blocks keep images in rows, so composition reverses the product
        Matrix comm = bj * bi - bi * bj;
        if (!g0.contains(comm.flatten()))
          throw math_error("g0 is not a subalgebra: commutator of basis elements " +
                           std::to_string(i) + "," + std::to_string(j) + " escapes the span");
      }
    replace_frontier(g0, "g0", false);
  }

private:
  friend Subspace make_reduction(const ReductionSpec&, const ProlongedAlgebra&);

  // chosen expression of each basis element of g_{-s} (s >= 2) as a
  // combination of brackets [g_{-1}, g_{-(s-1)}], fixed once per base
  struct ExprTerm {
    Rat coeff;
    std::size_t a;  // g_{-1} index
    std::size_t b;  // g_{-(s-1)} index
  };

  void build_expressions() {
    exprs_.assign(base_.depth() + 1, {});
    for (int s = 2; s <= base_.depth(); ++s) {
      std::size_t ns = base_.dim(-s), n1 = base_.dim(-1), nprev = base_.dim(-(s - 1));
      exprs_[s].resize(ns);
      if (ns == 0) continue;
      Matrix e(ns, n1 * nprev + ns);
      for (std::size_t a = 0; a < n1; ++a)
        for (std::size_t b = 0; b < nprev; ++b) {
          Vec v = base_.bracket_basis(-1, a, -(s - 1), b);
          for (std::size_t r = 0; r < ns; ++r) e(r, a * nprev + b) = v[r];
        }
      for (std::size_t m = 0; m < ns; ++m) e(m, n1 * nprev + m) = 1;  // [E | I]
      RrefResult rr = rref(e);
      for (std::size_t m = 0; m < ns; ++m)
        for (std::size_t k = 0; k < rr.rank; ++k) {
          if (rr.pivot_cols[k] >= n1 * nprev)
            throw math_error("base algebra is not fundamental at degree " + std::to_string(-s));
          Rat c = rr.r(k, n1 * nprev + m);
          if (c != 0)
            exprs_[s][m].push_back({c, rr.pivot_cols[k] / nprev, rr.pivot_cols[k] % nprev});
        }
    }
  }

  // [u, basis(src, idx)] where u.degree may be negative during reconstruction
  Element bracket_with_basis(const Element& u, int src, std::size_t idx) const {
    Vec eb(base_.dim(src));
    eb.at(idx) = 1;
    if (u.degree < 0)
      return Element{u.degree + src, base_.bracket(u.degree, u.coords, src, eb)};
    return Element{u.degree + src, apply(u, src, eb)};
  }

  std::size_t dim_at_clamped(int d) const { return d < -base_.depth() ? 0 : dim_at(d); }

  /// Reconstructs all deeper blocks of a degree-k candidate from its g_{-1}
  /// block along the chosen bracket expressions.
  Chain build_chain(int k, const Matrix& g1_blk) const {
    Chain chain;
    chain.blocks.resize(base_.depth());
    chain.blocks[0] = g1_blk;
    for (int s = 2; s <= base_.depth(); ++s) {
      std::size_t ns = base_.dim(-s);
      Matrix blk(ns, dim_at_clamped(k - s));
      for (std::size_t m = 0; m < ns; ++m) {
        Vec acc(blk.cols());
        for (const ExprTerm& t : exprs_[s][m]) {
          // u([x_a, y_b]) = [u(x_a), y_b] + [x_a, u(y_b)]
          Element uxa{k - 1, chain.blocks[0].row(t.a)};
          Element term1 = bracket_with_basis(uxa, -(s - 1), t.b);
          Element uyb{k - s + 1, chain.blocks[s - 2].row(t.b)};
          Element term2 = bracket_with_basis(uyb, -1, t.a);  // = [u(y_b), x_a]
          for (std::size_t c = 0; c < acc.size(); ++c)
            acc[c] += t.coeff * (term1.coords[c] - term2.coords[c]);
        }
        blk.set_row(m, acc);
      }
      chain.blocks[s - 1] = std::move(blk);
    }
    return chain;
  }

  Component solve_component(int k) const;
  void replace_frontier(const Subspace& reduced, const std::string& kind, bool record);

  Gnla base_;
  unsigned threads_;
  std::vector<Component> comps_;
  std::optional<int> finite_type_;
  std::vector<ReductionRecord> reductions_;
  std::vector<std::vector<std::vector<ExprTerm>>> exprs_;  // exprs_[s][m]
};

inline ProlongedAlgebra::Component ProlongedAlgebra::solve_component(int k) const {
  if (k != static_cast<int>(comps_.size()))
    throw std::logic_error("solve_component: can only extend at the frontier");
  const std::size_t n1 = base_.dim(-1);
  const std::size_t prev_dim = (k == 0) ? n1 : comps_[k - 1].space.dim();
  const std::size_t unknowns = n1 * prev_dim;

  Component comp;
  comp.degree = k;
  if (unknowns == 0) {
    comp.space = Subspace::zero(0);
    return comp;
  }

  // one candidate chain per unit g_{-1} block; reconstruction and residuals
  // are linear in the block, so the kernel combines candidates directly
  std::vector<Chain> cand(unknowns);
  detail::run_parallel(unknowns, threads_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      Matrix unit(n1, prev_dim);
      unit(t / prev_dim, t % prev_dim) = 1;
      cand[t] = build_chain(k, unit);
    }
  });

  // derivation-identity residuals over all pairs of negative basis elements
  std::vector<std::pair<std::pair<int, std::size_t>, std::pair<int, std::size_t>>> pairs;
  for (int i = -1; i >= -base_.depth(); --i)
    for (std::size_t a = 0; a < base_.dim(i); ++a)
      for (int j = i; j >= -base_.depth(); --j)
        for (std::size_t b = (j == i ? a + 1 : 0); b < base_.dim(j); ++b)
          if (k + i + j >= -base_.depth()) pairs.push_back({{i, a}, {j, b}});

  std::vector<std::size_t> row_offset(pairs.size() + 1, 0);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    int d = k + pairs[p].first.first + pairs[p].second.first;
    row_offset[p + 1] = row_offset[p] + dim_at_clamped(d);
  }

  Matrix constraints(row_offset.back(), unknowns);
  detail::run_parallel(unknowns, threads_, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t) {
      const Chain& ch = cand[t];
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        auto [i, a] = pairs[p].first;
        auto [j, b] = pairs[p].second;
        int d = k + i + j;
        std::size_t rows = dim_at_clamped(d);
        if (rows == 0) continue;
        Vec lhs(rows);  // u([a,b])
        if (i + j >= -base_.depth()) {
          Vec br = base_.bracket_basis(i, a, j, b);
          const Matrix& blk = ch.blocks[static_cast<std::size_t>(-(i + j)) - 1];
          for (std::size_t m = 0; m < br.size(); ++m) {
            if (br[m] == 0) continue;
            for (std::size_t c = 0; c < rows; ++c) lhs[c] += br[m] * blk(m, c);
          }
        }
        Element ua{k + i, ch.blocks[static_cast<std::size_t>(-i) - 1].row(a)};
        Element r1 = bracket_with_basis(ua, j, b);  // [u(a), b]
        Element ub{k + j, ch.blocks[static_cast<std::size_t>(-j) - 1].row(b)};
        Element r2 = bracket_with_basis(ub, i, a);  // [u(b), a] = -[a, u(b)]
        for (std::size_t c = 0; c < rows; ++c)
          constraints(row_offset[p] + c, t) = lhs[c] - r1.coords[c] + r2.coords[c];
      }
    }
  });

  comp.space = kernel_basis(constraints);
  for (std::size_t r = 0; r < comp.space.dim(); ++r) {
    Vec coords = comp.space.basis().row(r);
    Chain chain;
    chain.blocks.resize(base_.depth());
    for (int s = 1; s <= base_.depth(); ++s) {
      Matrix blk(base_.dim(-s), dim_at_clamped(k - s));
      for (std::size_t t = 0; t < unknowns; ++t)
        if (coords[t] != 0) {
          const Matrix& cb = cand[t].blocks[s - 1];
          for (std::size_t rr = 0; rr < blk.rows(); ++rr)
            for (std::size_t cc = 0; cc < blk.cols(); ++cc)
              blk(rr, cc) += coords[t] * cb(rr, cc);
        }
      chain.blocks[s - 1] = std::move(blk);
    }
    comp.basis.push_back(std::move(chain));
  }
  return comp;
}

inline void ProlongedAlgebra::replace_frontier(const Subspace& reduced, const std::string& kind,
                                               bool record) {
  Component& frontier = comps_.back();
  ReductionRecord rec;
  rec.degree = frontier.degree;
  rec.kind = kind;
  rec.dim_before = frontier.space.dim();
  rec.dim_after = reduced.dim();

  std::vector<Chain> basis;
  for (std::size_t r = 0; r < reduced.dim(); ++r) {
    auto coords = frontier.space.coordinates(reduced.basis().row(r));
    if (!coords) throw math_error("reduction subspace is not contained in the computed component");
    Chain chain;
    chain.blocks.resize(base_.depth());
    for (int s = 1; s <= base_.depth(); ++s) {
      Matrix blk(base_.dim(-s), dim_at_clamped(frontier.degree - s));
      for (std::size_t m = 0; m < coords->size(); ++m)
        if ((*coords)[m] != 0) {
          const Matrix& cb = frontier.basis[m].blocks[s - 1];
          for (std::size_t rr = 0; rr < blk.rows(); ++rr)
            for (std::size_t cc = 0; cc < blk.cols(); ++cc)
              blk(rr, cc) += (*coords)[m] * cb(rr, cc);
        }
      chain.blocks[s - 1] = std::move(blk);
    }
    basis.push_back(std::move(chain));
  }

  // g_0-invariance audit for higher reductions: the g_{-1} block of
  // [g0_u, w_v] must stay inside the reduced span
  if (frontier.degree >= 1) {
    std::size_t n1 = base_.dim(-1);
    for (std::size_t u = 0; u < comps_[0].space.dim() && rec.g0_invariant; ++u)
      for (std::size_t v = 0; v < reduced.dim() && rec.g0_invariant; ++v) {
        Element gu = basis_element(0, u);
        Matrix block(n1, dim_at_clamped(frontier.degree - 1));
        for (std::size_t t = 0; t < n1; ++t) {
          Element et = basis_element(-1, t);
          Element inner{frontier.degree - 1, basis[v].blocks[0].row(t)};  // [w_v, e_t]
          Element guin = bracket(gu, inner);                              // [g0_u, [w_v, e_t]]
          Vec get = apply(gu, -1, et.coords);                             // [g0_u, e_t]
          Vec wget(block.cols());                                         // [w_v, [g0_u, e_t]]
          for (std::size_t m = 0; m < get.size(); ++m)
            if (get[m] != 0)
              for (std::size_t c = 0; c < wget.size(); ++c)
                wget[c] += get[m] * basis[v].blocks[0](m, c);
          block.set_row(t, vec_sub(std::move(guin.coords), wget));
        }
        if (!reduced.contains(block.flatten())) {
          rec.g0_invariant = false;
          rec.note = "not g0-invariant: witness (g0 #" + std::to_string(u) + ", reduced #" +
                     std::to_string(v) + ")";
        }
      }
  }

  frontier.space = reduced;
  frontier.basis = std::move(basis);
  if (record) reductions_.push_back(rec);
  if (reduced.dim() == 0 && !finite_type_) finite_type_ = frontier.degree;
}

/// The reduction subspace for a spec inside the computed component of the
/// spec's degree. Orthogonal/conformal/complex constrain the g_{-1} block at
/// degree 0; divergence-free is the trace condition on depth-1 bases.
inline Subspace make_reduction(const ReductionSpec& spec, const ProlongedAlgebra& state) {
  if (spec.degree > state.computed_depth() || spec.degree < 0)
    throw math_error("reduction degree " + std::to_string(spec.degree) +
                     " is outside the computed range");
  const auto& comp = state.component(spec.degree);
  const std::size_t dim = comp.space.dim();
  const std::size_t n1 = state.base().dim(-1);

  auto combine_kernel = [&](const Subspace& ker, std::size_t keep) {
    std::vector<Vec> rows;
    for (std::size_t r = 0; r < ker.dim(); ++r) {
      Vec coords = ker.basis().row(r);
      coords.resize(keep);
      rows.push_back(comp.space.combine(coords));
    }
    return Subspace::span_of_rows(rows, comp.space.ambient_dim());
  };

  switch (spec.kind) {
    case ReductionSpec::Kind::custom: {
      if (spec.span.ambient_dim() != comp.space.ambient_dim())
        throw std::invalid_argument("custom reduction: ambient dimension mismatch");
      if (!comp.space.contains(spec.span))
        throw math_error("reduction subspace is not contained in the computed component");
      return spec.span;
    }
    case ReductionSpec::Kind::orthogonal:
    case ReductionSpec::Kind::conformal: {
      if (spec.degree != 0)
        throw std::invalid_argument("orthogonal/conformal reductions act at degree 0");
      const Matrix& g = spec.form;
      if (g.rows() != n1 || g.cols() != n1)
        throw std::invalid_argument("bilinear form shape mismatch");
      if (!(g == g.transposed())) throw math_error("bilinear form must be symmetric");
      if (kernel_basis(g).dim() != 0) throw math_error("bilinear form must be nondegenerate");
      bool conf = spec.kind == ReductionSpec::Kind::conformal;
      Matrix sys(n1 * n1, dim + (conf ? 1 : 0));
      for (std::size_t m = 0; m < dim; ++m) {
        // blocks keep images in rows; the endomorphism matrix is the transpose
        Matrix a = state.g1_block(0, m).transposed();
        Matrix cond = a.transposed() * g + g * a;
        for (std::size_t r = 0; r < n1; ++r)
          for (std::size_t c = 0; c < n1; ++c) sys(r * n1 + c, m) = cond(r, c);
      }
      if (conf)
        for (std::size_t r = 0; r < n1; ++r)
          for (std::size_t c = 0; c < n1; ++c) sys(r * n1 + c, dim) = -g(r, c);
      return combine_kernel(kernel_basis(sys), dim);
    }
    case ReductionSpec::Kind::complex_structure: {
      if (spec.degree != 0) throw std::invalid_argument("complex reductions act at degree 0");
      const Matrix& j = spec.form;
      if (j.rows() != n1 || j.cols() != n1)
        throw std::invalid_argument("complex structure shape mismatch");
      if (n1 % 2 != 0) throw math_error("complex structure needs even rank");
      Matrix j2 = j * j;
      Matrix minus_id(n1, n1);
      for (std::size_t r = 0; r < n1; ++r) minus_id(r, r) = -1;
      if (!(j2 == minus_id)) throw math_error("complex structure must square to -identity");
      Matrix sys(n1 * n1, dim);
      for (std::size_t m = 0; m < dim; ++m) {
        Matrix a = state.g1_block(0, m).transposed();
        Matrix cond = a * j - j * a;
        for (std::size_t r = 0; r < n1; ++r)
          for (std::size_t c = 0; c < n1; ++c) sys(r * n1 + c, m) = cond(r, c);
      }
      return combine_kernel(kernel_basis(sys), dim);
    }
    case ReductionSpec::Kind::divergence_free: {
      if (spec.degree < 1)
        throw std::invalid_argument("divergence-free reductions act at degree >= 1");
      if (state.base().depth() != 1)
        throw math_error("divergence-free reduction requires an abelian depth-1 base");
      const int k = spec.degree;
      // contraction rows: for a tuple (t_1..t_{k-1}, c) and element u the sum
      // over a of the a-th coordinate of [u(e_{t_1})..(e_{t_{k-1}})(e_a)](e_c)
      std::vector<std::vector<std::size_t>> tuples{{}};
      for (int step = 0; step < k - 1; ++step) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& t : tuples)
          for (std::size_t a = 0; a < n1; ++a) {
            auto u = t;
            u.push_back(a);
            next.push_back(std::move(u));
          }
        tuples = std::move(next);
      }
      Matrix sys(tuples.size() * n1, dim);
      const Matrix& c0basis = state.component(0).space.basis();
      for (std::size_t m = 0; m < dim; ++m)
        for (std::size_t ti = 0; ti < tuples.size(); ++ti) {
          Element cur = state.basis_element(k, m);
          for (std::size_t a : tuples[ti]) {
            Vec ea(n1);
            ea[a] = 1;
            cur = Element{cur.degree - 1, state.apply(cur, -1, ea)};
          }
          // cur has degree 1; expand each value cur(e_a) to its g_{-1} block
          for (std::size_t c = 0; c < n1; ++c) {
            Rat tr = 0;
            for (std::size_t a = 0; a < n1; ++a) {
              Vec ea(n1);
              ea[a] = 1;
              Vec val0 = state.apply(cur, -1, ea);  // coords in the degree-0 component
              Vec amb(n1 * n1);
              for (std::size_t q = 0; q < val0.size(); ++q)
                if (val0[q] != 0) vec_add_scaled(amb, val0[q], c0basis.row(q));
              tr += amb[c * n1 + a];
            }
            sys(ti * n1 + c, m) = tr;
          }
        }
      return combine_kernel(kernel_basis(sys), dim);
    }
  }
  throw std::logic_error("unreachable reduction kind");
}

inline void ProlongedAlgebra::reduce(const ReductionSpec& spec) {
  if (spec.degree != computed_depth())
    throw std::logic_error("reduce: reductions apply to the frontier component");
  Subspace reduced = make_reduction(spec, *this);
  if (spec.degree == 0) {
    std::size_t before = comps_[0].space.dim();
    restrict_g0(reduced);
    reductions_.push_back({0, spec.kind_name(), before, reduced.dim(), true, ""});
    return;
  }
  replace_frontier(reduced, spec.kind_name(), true);
}

/// Next prolongation component of the state, as the canonical subspace of
/// flattened g_{-1} blocks.
inline Subspace prolong_step(const ProlongedAlgebra& state) { return state.peek_next().space; }

/// Full prolongation driver: der_0 (or an explicit g0) at degree 0, then
/// degree-by-degree extension, applying each reduction at its degree before
/// prolonging further. Stops at an exactly-zero component or at max_degree.
inline ProlongedAlgebra prolong(const Gnla& m, const std::optional<Subspace>& g0,
                                std::vector<ReductionSpec> reductions, int max_degree,
                                unsigned threads = solver_threads()) {
  for (std::size_t i = 0; i + 1 < reductions.size(); ++i)
    if (reductions[i].degree >= reductions[i + 1].degree)
      throw std::invalid_argument("reduction degrees must be strictly increasing");
  if (max_degree < 0) throw std::invalid_argument("max_degree must be >= 0");
  ProlongedAlgebra state(m, threads);
  std::size_t next_red = 0;
  for (int k = 0; k <= max_degree; ++k) {
    state.advance();
    if (k == 0 && g0) state.restrict_g0(*g0);
    while (next_red < reductions.size() && reductions[next_red].degree == k) {
      state.reduce(reductions[next_red]);
      ++next_red;
    }
    if (state.finite_type()) break;
  }
  if (next_red < reductions.size())
    throw math_error("reduction at degree " + std::to_string(reductions[next_red].degree) +
                     " lies beyond the computed range");
  return state;
}

inline DimsTable dims(const ProlongedAlgebra& state) {
  DimsTable t;
  for (int d = -state.base().depth(); d < 0; ++d)
    t.by_degree.push_back({d, state.base().dim(d)});
  for (int k = 0; k <= state.computed_depth(); ++k) t.by_degree.push_back({k, state.dim_at(k)});
  for (const auto& [d, n] : t.by_degree) t.total += n;
  t.kappa = state.finite_type();
  t.truncated = !t.kappa.has_value();
  return t;
}

/// Structure constants of the assembled graded algebra up to `depth`.
struct BracketTables {
  int min_degree = 0, max_degree = 0;
  // t[da][ia][db][ib] = coords of [basis(da,ia), basis(db,ib)] (degree-shifted
  // indices); empty vector when da+db leaves [min_degree, max_degree]
  std::vector<std::vector<std::vector<std::vector<Vec>>>> t;
  std::vector<std::size_t> dims;

  std::size_t dim(int d) const {
    if (d < min_degree || d > max_degree) return 0;
    return dims[d - min_degree];
  }
  const Vec& at(int da, std::size_t ia, int db, std::size_t ib) const {
    return t[da - min_degree][ia][db - min_degree][ib];
  }
  Vec& at(int da, std::size_t ia, int db, std::size_t ib) {
    return t[da - min_degree][ia][db - min_degree][ib];
  }
};

inline BracketTables assemble_bracket_tables(const ProlongedAlgebra& state, int depth) {
  if (depth > state.computed_depth() && !state.finite_type())
    throw std::out_of_range("assemble_bracket_tables: depth beyond computed range");
  BracketTables bt;
  bt.min_degree = -state.base().depth();
  bt.max_degree = depth;
  int span = depth - bt.min_degree + 1;
  bt.dims.resize(span);
  for (int d = bt.min_degree; d <= depth; ++d)
    bt.dims[d - bt.min_degree] = d < 0 ? state.base().dim(d) : state.dim_at(d);
  bt.t.resize(span);
  for (int da = bt.min_degree; da <= depth; ++da) {
    bt.t[da - bt.min_degree].resize(bt.dim(da));
    for (std::size_t ia = 0; ia < bt.dim(da); ++ia) {
      bt.t[da - bt.min_degree][ia].resize(span);
      for (int db = bt.min_degree; db <= depth; ++db) {
        auto& cell = bt.t[da - bt.min_degree][ia][db - bt.min_degree];
        cell.resize(bt.dim(db));
        for (std::size_t ib = 0; ib < bt.dim(db); ++ib) {
          int d = da + db;
          if (d < bt.min_degree || d > bt.max_degree) continue;  // stays empty
          Element r = state.bracket(state.basis_element(da, ia), state.basis_element(db, ib));
          cell[ib] = std::move(r.coords);
        }
      }
    }
  }
  return bt;
}

struct JacobiReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Antisymmetry plus Jacobi over every basis triple whose pairwise and total
/// brackets stay inside the assembled range.
inline JacobiReport check_jacobi_on_tables(const BracketTables& bt) {
  JacobiReport rep;
  std::vector<std::pair<int, std::size_t>> basis;
  for (int d = bt.min_degree; d <= bt.max_degree; ++d)
    for (std::size_t i = 0; i < bt.dim(d); ++i) basis.push_back({d, i});

  auto name = [](int d, std::size_t i) { return std::to_string(d) + "#" + std::to_string(i); };

  for (const auto& [da, ia] : basis)
    for (const auto& [db, ib] : basis) {
      int d = da + db;
      if (d < bt.min_degree || d > bt.max_degree) continue;
      const Vec& fwd = bt.at(da, ia, db, ib);
      const Vec& bwd = bt.at(db, ib, da, ia);
      for (std::size_t c = 0; c < fwd.size(); ++c)
        if (fwd[c] + bwd[c] != 0) {
          rep.violations.push_back("antisymmetry fails on (" + name(da, ia) + ", " +
                                   name(db, ib) + ")");
          break;
        }
    }

  auto add_outer = [&](int dab, const Vec& ab, int dc, std::size_t ic, Vec& total) {
    if (dab < bt.min_degree) return;  // inner bracket vanished below the depth
    for (std::size_t m = 0; m < ab.size(); ++m) {
      if (ab[m] == 0) continue;
      const Vec& inner = bt.at(dab, m, dc, ic);
      for (std::size_t t = 0; t < total.size(); ++t) total[t] += ab[m] * inner[t];
    }
  };

  for (std::size_t x = 0; x < basis.size(); ++x)
    for (std::size_t y = x; y < basis.size(); ++y)
      for (std::size_t z = y; z < basis.size(); ++z) {
        auto [da, ia] = basis[x];
        auto [db, ib] = basis[y];
        auto [dc, ic] = basis[z];
        int dab = da + db, dbc = db + dc, dca = dc + da;
        int total_deg = da + db + dc;
        if (dab > bt.max_degree || dbc > bt.max_degree || dca > bt.max_degree) continue;
        if (total_deg > bt.max_degree || total_deg < bt.min_degree) continue;
        Vec total(bt.dim(total_deg));
        if (dab >= bt.min_degree) add_outer(dab, bt.at(da, ia, db, ib), dc, ic, total);
        if (dbc >= bt.min_degree) add_outer(dbc, bt.at(db, ib, dc, ic), da, ia, total);
        if (dca >= bt.min_degree) add_outer(dca, bt.at(dc, ic, da, ia), db, ib, total);
        if (!vec_is_zero(total))
          rep.violations.push_back("jacobi fails on (" + name(da, ia) + ", " + name(db, ib) +
                                   ", " + name(dc, ic) + ")");
      }
  return rep;
}

inline JacobiReport verify_graded_jacobi(const ProlongedAlgebra& state, int depth) {
  return check_jacobi_on_tables(assemble_bracket_tables(state, depth));
}

/// Grading-preserving derivation algebra der_0(m) with its commutator table
/// in the canonical basis.
struct Der0Result {
  Subspace space;                             // flattened g_{-1} blocks
  std::vector<std::vector<Vec>> commutator;   // coords of [b_i, b_j]
};

inline Der0Result der0(const Gnla& m, unsigned threads = solver_threads()) {
  ProlongedAlgebra state(m, threads);
  state.advance();
  Der0Result out;
  out.space = state.component(0).space;
  std::size_t n = out.space.dim();
  out.commutator.assign(n, std::vector<Vec>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.commutator[i][j] =
          state.bracket(state.basis_element(0, i), state.basis_element(0, j)).coords;
  return out;
}

}  // namespace tanaka
