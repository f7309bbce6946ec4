#pragma once

#include "tanaka/gnla.hpp"
#include "tanaka/poly.hpp"

#include <string>
#include <vector>

namespace tanaka {

/// Vector field with multivariate polynomial coefficients, one per coordinate.
struct PolyVectorField {
  std::vector<Poly> comp;

  std::size_t ncoords() const { return comp.size(); }

  bool is_zero() const {
    for (const Poly& p : comp)
      if (!p.is_zero()) return false;
    return true;
  }

  static PolyVectorField zero(std::size_t n) {
    PolyVectorField f;
    f.comp.assign(n, Poly(n));
    return f;
  }

  static PolyVectorField coordinate(std::size_t n, std::size_t dir) {
    PolyVectorField f = zero(n);
    f.comp[dir] = Poly::constant(n, 1);
    return f;
  }

  static PolyVectorField parse(const std::vector<std::string>& coeffs,
                               const std::vector<std::string>& coords) {
    if (coeffs.size() != coords.size())
      throw parse_error("field coefficient count does not match coordinate count");
    PolyVectorField f;
    for (const std::string& c : coeffs) f.comp.push_back(Poly::parse(c, coords));
    return f;
  }

  Vec eval(const Vec& point) const {
    Vec v(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) v[i] = comp[i].eval(point);
    return v;
  }

  friend PolyVectorField operator-(PolyVectorField a, const PolyVectorField& b) {
    for (std::size_t i = 0; i < a.comp.size(); ++i) a.comp[i] -= b.comp[i];
    return a;
  }

  friend PolyVectorField operator*(const Poly& c, PolyVectorField f) {
    for (Poly& p : f.comp) p = c * p;
    return f;
  }

  bool operator==(const PolyVectorField&) const = default;
};

/// Commutator of vector fields: [X,Y]^k = X(Y^k) - Y(X^k).
inline PolyVectorField lie_bracket(const PolyVectorField& x, const PolyVectorField& y) {
  std::size_t n = x.ncoords();
  if (y.ncoords() != n) throw std::invalid_argument("lie_bracket: coordinate count mismatch");
  PolyVectorField out = PolyVectorField::zero(n);
  for (std::size_t k = 0; k < n; ++k) {
    Poly acc(n);
    for (std::size_t j = 0; j < n; ++j) {
      acc += x.comp[j] * y.comp[k].derivative(j);
      acc -= y.comp[j] * x.comp[k].derivative(j);
    }
    out.comp[k] = std::move(acc);
  }
  return out;
}

/// Rank of a polynomial matrix over the rational-function field, by
/// fraction-free elimination with polynomial pivots.
inline std::size_t generic_rank(std::vector<std::vector<Poly>> rows, std::size_t cols) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows.size(); ++col) {
    // pivot: smallest (total degree, term count) nonzero entry in this column
    std::size_t best = rows.size();
    for (std::size_t r = rank; r < rows.size(); ++r) {
      if (rows[r][col].is_zero()) continue;
      if (best == rows.size()) {
        best = r;
        continue;
      }
      auto key = [&](std::size_t i) {
        return std::make_pair(rows[i][col].max_total_degree().value_or(0),
                              rows[i][col].term_count());
      };
      if (key(r) < key(best)) best = r;
    }
    if (best == rows.size()) continue;
    std::swap(rows[rank], rows[best]);
    const Poly pivot = rows[rank][col];
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col].is_zero()) continue;
      const Poly factor = rows[r][col];
      for (std::size_t c = col; c < cols; ++c)
        rows[r][c] = pivot * rows[r][c] - factor * rows[rank][c];
      // rescale by the rational content to curb growth
      Rat content;
      bool found = false;
      for (std::size_t c = col; c < cols && !found; ++c)
        for (const auto& [e, cf] : rows[r][c].terms()) {
          content = cf;
          found = true;
          break;
        }
      if (found)
        for (std::size_t c = col; c < cols; ++c)
          rows[r][c] = Rat(Rat(1) / content) * rows[r][c];
    }
    ++rank;
  }
  return rank;
}

inline std::size_t generic_rank(const std::vector<PolyVectorField>& fields) {
  if (fields.empty()) return 0;
  std::size_t n = fields[0].ncoords();
  std::vector<std::vector<Poly>> rows;
  for (const auto& f : fields) rows.push_back(f.comp);
  return generic_rank(std::move(rows), n);
}

struct FlagStep {
  std::vector<PolyVectorField> generators;  // nested: contains all earlier steps
  std::size_t generic_rank = 0;
};

/// Weak derived flag of a distribution given by polynomial generators.
struct Flag {
  std::vector<std::string> coords;
  std::vector<FlagStep> steps;
  bool bracket_generating = false;
  std::size_t nu_hat = 0;  // first step whose generic rank equals the coordinate count

  /// Generic growth vector, truncated at the first full-rank step.
  std::vector<std::size_t> generic_growth() const {
    std::vector<std::size_t> g;
    for (const FlagStep& s : steps) {
      g.push_back(s.generic_rank);
      if (s.generic_rank == coords.size()) break;
    }
    return g;
  }
};

/// Builds generator lists step by step: step i+1 adds brackets of the input
/// fields with the new generators of step i. Computation continues one step
/// past generic saturation so pointwise queries can detect drops at singular
/// points, up to max_step.
inline Flag derived_flag(const std::vector<PolyVectorField>& fields,
                         const std::vector<std::string>& coords, std::size_t max_step) {
  if (fields.empty()) throw std::invalid_argument("derived_flag: no fields");
  if (max_step < 1) throw std::invalid_argument("derived_flag: max_step must be >= 1");
  std::size_t n = coords.size();
  for (const auto& f : fields)
    if (f.ncoords() != n) throw std::invalid_argument("derived_flag: coordinate mismatch");

  Flag flag;
  flag.coords = coords;
  std::vector<PolyVectorField> gens;
  std::vector<PolyVectorField> fresh;
  for (const auto& f : fields) {
    if (f.is_zero()) continue;
    bool dup = false;
    for (const auto& g : gens) dup = dup || g == f;
    if (!dup) {
      gens.push_back(f);
      fresh.push_back(f);
    }
  }
  if (gens.empty()) throw std::invalid_argument("derived_flag: all fields vanish");

  std::size_t full_rank_streak = 0;
  for (std::size_t step = 1; step <= max_step; ++step) {
    if (step > 1) {
      std::vector<PolyVectorField> next_fresh;
      for (const auto& f : fields)
        for (const auto& g : fresh) {
          PolyVectorField br = lie_bracket(f, g);
          if (br.is_zero()) continue;
          bool dup = false;
          for (const auto& h : gens) dup = dup || h == br;
          for (const auto& h : next_fresh) dup = dup || h == br;
          if (!dup) next_fresh.push_back(std::move(br));
        }
      fresh = std::move(next_fresh);
      for (const auto& g : fresh) gens.push_back(g);
    }
    FlagStep fs;
    fs.generators = gens;
    fs.generic_rank = generic_rank(gens);
    flag.steps.push_back(std::move(fs));
    if (flag.steps.back().generic_rank == n) {
      if (flag.nu_hat == 0) {
        flag.nu_hat = step;
        flag.bracket_generating = true;
      }
      ++full_rank_streak;
      if (full_rank_streak >= 2) break;  // one step beyond saturation is kept
    }
    if (step > 1 && fresh.empty()) break;  // generator lists stabilized exactly
  }
  return flag;
}

/// Ranks of the evaluated generator matrices per step, truncated at the first
/// step that reaches the full coordinate rank.
inline std::vector<std::size_t> growth_vector_at(const Flag& flag, const Vec& point) {
  if (point.size() != flag.coords.size())
    throw std::invalid_argument("growth_vector_at: point dimension mismatch");
  std::vector<std::size_t> growth;
  for (const FlagStep& s : flag.steps) {
    Matrix m(s.generators.size(), point.size());
    for (std::size_t r = 0; r < s.generators.size(); ++r)
      m.set_row(r, s.generators[r].eval(point));
    std::size_t rank = rref(m).rank;
    growth.push_back(rank);
    if (rank == flag.coords.size()) break;
  }
  return growth;
}

/// Algorithmic regularity proxy: the pointwise growth vector equals the
/// generic one (pointwise ranks reach the generic ranks at every step).
inline bool regular_at(const Flag& flag, const Vec& point) {
  return growth_vector_at(flag, point) == flag.generic_growth();
}

/// Adapted frame at a point: generators whose evaluations give a filtered
/// basis, chosen greedily preferring earlier-step generators.
struct AdaptedFrame {
  std::vector<PolyVectorField> fields;
  std::vector<std::size_t> steps;  // nondecreasing
  Matrix eval;                     // rows = frame evaluations at the point
  Vec point;
};

/// Nilpotent approximation at a regular point: the graded algebra of the
/// filtration with structure constants from evaluated frame brackets reduced
/// modulo the lower filtration.
inline std::pair<Gnla, AdaptedFrame> gnla_at(const Flag& flag, const Vec& point) {
  if (!flag.bracket_generating)
    throw math_error("gnla_at: flag is not bracket generating at the computed depth");
  if (!regular_at(flag, point))
    throw math_error("gnla_at: point is not regular (growth vector differs from generic)");
  std::size_t n = flag.coords.size();
  std::vector<std::size_t> generic = flag.generic_growth();
  std::size_t nu = generic.size();

  AdaptedFrame frame;
  frame.point = point;
  std::vector<Vec> picked;
  for (std::size_t s = 1; s <= nu; ++s) {
    const FlagStep& fs = flag.steps[s - 1];
    for (const PolyVectorField& g : fs.generators) {
      if (picked.size() == generic[s - 1]) break;
      Vec v = g.eval(point);
      std::vector<Vec> trial = picked;
      trial.push_back(v);
      if (Subspace::span_of_rows(trial, n).dim() == trial.size()) {
        picked.push_back(std::move(v));
        frame.fields.push_back(g);
        frame.steps.push_back(s);
      }
    }
    if (picked.size() != generic[s - 1])
      throw math_error("gnla_at: could not complete an adapted frame at step " +
                       std::to_string(s));
  }
  frame.eval = Matrix::from_rows(picked, n);

  // structure constants: express evaluated brackets in the frame and keep the
  // coordinates at exactly the bracket's filtration step
  GnlaSpec spec;
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> by_step(nu + 1);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("e" + std::to_string(i + 1));
    spec.degrees[-static_cast<int>(frame.steps[i])].push_back(names[i]);
    by_step[frame.steps[i]].push_back(i);
  }
  // solve F^T c = w for each bracket value w (columns of F^T = frame vectors)
  Matrix ft = frame.eval.transposed();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::size_t target = frame.steps[a] + frame.steps[b];
      if (target > nu) continue;
      Vec w = lie_bracket(frame.fields[a], frame.fields[b]).eval(point);
      Matrix aug(n, n + 1);
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug(r, c) = ft(r, c);
        aug(r, n) = w[r];
      }
      RrefResult rr = rref(aug);
      Vec coeff(n);
      for (std::size_t k = 0; k < rr.rank; ++k) {
        if (rr.pivot_cols[k] == n) throw std::logic_error("gnla_at: frame solve inconsistent");
        coeff[rr.pivot_cols[k]] = rr.r(k, n);
      }
      GnlaSpec::Bracket br;
      br.a = names[a];
      br.b = names[b];
      for (std::size_t i = 0; i < n; ++i) {
        if (coeff[i] == 0) continue;
        if (frame.steps[i] > target)
          throw math_error("gnla_at: bracket escapes its filtration step (irregular data)");
        if (frame.steps[i] == target) br.terms.push_back({names[i], coeff[i]});
      }
      if (!br.terms.empty()) spec.brackets.push_back(std::move(br));
    }

  Gnla g = Gnla::from_spec(spec);
  if (!check_fundamental(g))
    throw math_error("gnla_at: extracted algebra is not fundamental");
  return {std::move(g), std::move(frame)};
}

}  // namespace tanaka
