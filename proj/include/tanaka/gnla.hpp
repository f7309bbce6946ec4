#pragma once

#include "tanaka/linalg.hpp"

#include <array>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace tanaka {

/// Raw, possibly inconsistent description of a graded nilpotent Lie algebra:
/// basis names per negative degree and a bracket table keyed by name pairs.
/// This is the parse-level form that validation operates on.
struct GnlaSpec {
  std::map<int, std::vector<std::string>> degrees;  // key < 0
  struct Bracket {
    std::string a, b;
    std::vector<std::pair<std::string, Rat>> terms;
  };
  std::vector<Bracket> brackets;
};

struct Violation {
  std::string kind;  // "malformed" | "grading" | "antisymmetry" | "jacobi" | "depth"
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> items;
  bool ok() const { return items.empty(); }
  std::string str() const {
    std::ostringstream os;
    if (items.empty()) {
      os << "valid\n";
    } else {
      for (const auto& v : items) os << v.kind << ": " << v.detail << "\n";
    }
    return os.str();
  }
};

namespace detail {

struct GnlaIndex {
  int depth = 0;                                   // nu
  std::vector<std::vector<std::string>> names;     // names[s-1] = basis of degree -s
  std::map<std::string, std::pair<int, std::size_t>> lookup;  // name -> (s, index)

  static std::optional<GnlaIndex> build(const GnlaSpec& spec, ValidationReport& report) {
    GnlaIndex ix;
    for (const auto& [deg, list] : spec.degrees) {
      if (deg >= 0) {
        report.items.push_back({"malformed", "non-negative degree key " + std::to_string(deg)});
        return std::nullopt;
      }
      ix.depth = std::max(ix.depth, -deg);
    }
    ix.names.resize(ix.depth);
    for (const auto& [deg, list] : spec.degrees) ix.names[-deg - 1] = list;
    if (ix.depth == 0 || ix.names[0].empty()) {
      report.items.push_back({"malformed", "degree -1 component must be non-empty"});
      return std::nullopt;
    }
    for (int s = 1; s <= ix.depth; ++s)
      for (std::size_t i = 0; i < ix.names[s - 1].size(); ++i) {
        const std::string& n = ix.names[s - 1][i];
        if (!ix.lookup.emplace(n, std::make_pair(s, i)).second) {
          report.items.push_back({"malformed", "duplicate basis name '" + n + "'"});
          return std::nullopt;
        }
      }
    return ix;
  }

  std::size_t flat(int s, std::size_t i) const {
    std::size_t off = 0;
    for (int t = 1; t < s; ++t) off += names[t - 1].size();
    return off + i;
  }
};

}  // namespace detail

/// Validated graded nilpotent Lie algebra with exact structure constants.
/// Components sit at degrees -1 .. -depth; brackets below -depth vanish.
class Gnla {
public:
  int depth() const { return depth_; }

  /// Dimension of the degree-d component; 0 outside [-depth, -1].
  std::size_t dim(int degree) const {
    if (degree >= 0 || degree < -depth_) return 0;
    return names_[-degree - 1].size();
  }

  const std::vector<std::string>& names(int degree) const { return names_.at(-degree - 1); }

  std::size_t total_dim() const {
    std::size_t t = 0;
    for (const auto& n : names_) t += n.size();
    return t;
  }

  /// [basis a of degree i, basis b of degree j] as coefficients in degree i+j.
  Vec bracket_basis(int i, std::size_t a, int j, std::size_t b) const {
    std::size_t target = dim(i + j);
    if (target == 0) return Vec{};
    if (i < j || (i == j && a > b)) {
      Vec v = bracket_basis(j, b, i, a);
      for (Rat& x : v) x = -x;
      return v;
    }
    if (i == j && a == b) return Vec(target);
    auto it = table_.find(key(i, a, j, b));
    if (it == table_.end()) return Vec(target);
    return it->second;
  }

  /// Bilinear bracket of coordinate vectors.
  Vec bracket(int i, const Vec& va, int j, const Vec& vb) const {
    if (va.size() != dim(i) || vb.size() != dim(j))
      throw std::invalid_argument("gnla bracket: coordinate length mismatch");
    Vec out(dim(i + j));
    if (out.empty()) return out;
    for (std::size_t a = 0; a < va.size(); ++a) {
      if (va[a] == 0) continue;
      for (std::size_t b = 0; b < vb.size(); ++b) {
        if (vb[b] == 0) continue;
        Vec t = bracket_basis(i, a, j, b);
        Rat c = va[a] * vb[b];
        for (std::size_t k = 0; k < out.size(); ++k) out[k] += c * t[k];
      }
    }
    return out;
  }

  static Gnla from_spec(const GnlaSpec& spec);
  GnlaSpec to_spec() const;

  /// Abelian algebra of rank n concentrated in degree -1.
  static Gnla abelian(std::size_t n) {
    GnlaSpec spec;
    for (std::size_t i = 1; i <= n; ++i) spec.degrees[-1].push_back("e" + std::to_string(i));
    return from_spec(spec);
  }

  /// Heisenberg algebra with dim g_{-1} = 2d, dim g_{-2} = 1 and the
  /// symplectic pairing [x_i, p_i] = z.
  static Gnla heisenberg(std::size_t d) {
    if (d == 0) throw std::invalid_argument("heisenberg: d must be positive");
    GnlaSpec spec;
    for (std::size_t i = 1; i <= d; ++i) spec.degrees[-1].push_back("x" + std::to_string(i));
    for (std::size_t i = 1; i <= d; ++i) spec.degrees[-1].push_back("p" + std::to_string(i));
    spec.degrees[-2].push_back("z");
    for (std::size_t i = 1; i <= d; ++i)
      spec.brackets.push_back(
          {"x" + std::to_string(i), "p" + std::to_string(i), {{"z", Rat(1)}}});
    return from_spec(spec);
  }

  bool operator==(const Gnla&) const = default;

private:
  friend ValidationReport validate_gnla(const GnlaSpec&);

  // key: source degrees/indices in canonical orientation (i > j, or i == j and a < b)
  using Key = std::array<std::size_t, 4>;
  static Key key(int i, std::size_t a, int j, std::size_t b) {
    return {static_cast<std::size_t>(-i), a, static_cast<std::size_t>(-j), b};
  }

  int depth_ = 0;
  std::vector<std::vector<std::string>> names_;
  std::map<Key, Vec> table_;
};

/// Checks every axiom and reports all violations with witnesses. An empty
/// report means the table describes a graded nilpotent Lie algebra.
inline ValidationReport validate_gnla(const GnlaSpec& spec) {
  ValidationReport report;
  auto ix_opt = detail::GnlaIndex::build(spec, report);
  if (!ix_opt) return report;
  const detail::GnlaIndex& ix = *ix_opt;
  const int nu = ix.depth;

  // normalized table in canonical orientation
  std::map<Gnla::Key, Vec> table;
  auto dim_of = [&](int deg) -> std::size_t {
    if (deg >= 0 || deg < -nu) return 0;
    return ix.names[-deg - 1].size();
  };

  for (const auto& br : spec.brackets) {
    auto ita = ix.lookup.find(br.a);
    auto itb = ix.lookup.find(br.b);
    if (ita == ix.lookup.end() || itb == ix.lookup.end()) {
      report.items.push_back(
          {"malformed", "bracket [" + br.a + "," + br.b + "] uses unknown basis name"});
      continue;
    }
    auto [sa, a] = ita->second;
    auto [sb, b] = itb->second;
    int i = -sa, j = -sb;
    if (br.a == br.b) {
      for (const auto& [n, c] : br.terms)
        if (c != 0)
          report.items.push_back({"antisymmetry", "[" + br.a + "," + br.a + "] declared nonzero"});
      continue;
    }
    // grading / depth checks on the declared coefficients
    Vec v(dim_of(i + j));
    bool graded_ok = true;
    for (const auto& [n, c] : br.terms) {
      if (c == 0) continue;
      auto itn = ix.lookup.find(n);
      if (itn == ix.lookup.end()) {
        report.items.push_back(
            {"malformed", "bracket [" + br.a + "," + br.b + "] maps to unknown name '" + n + "'"});
        graded_ok = false;
        continue;
      }
      int tdeg = -itn->second.first;
      if (i + j < -nu) {
        report.items.push_back({"depth", "bracket [" + br.a + "," + br.b + "] of degree " +
                                             std::to_string(i + j) + " must vanish below -" +
                                             std::to_string(nu)});
        graded_ok = false;
        continue;
      }
      if (tdeg != i + j) {
        report.items.push_back({"grading", "bracket [" + br.a + "," + br.b + "] hits '" + n +
                                               "' of degree " + std::to_string(tdeg) +
                                               ", expected " + std::to_string(i + j)});
        graded_ok = false;
        continue;
      }
      v[itn->second.second] += c;
    }
    if (!graded_ok) continue;
    // orient canonically and check consistency of doubly-declared pairs
    bool flip = (i < j) || (i == j && a > b);
    Gnla::Key k =
        flip ? Gnla::key(j, b, i, a) : Gnla::key(i, a, j, b);
    if (flip)
      for (Rat& x : v) x = -x;
    auto [it, inserted] = table.emplace(k, v);
    if (!inserted && it->second != v)
      report.items.push_back({"antisymmetry", "brackets [" + br.a + "," + br.b + "] and [" +
                                                  br.b + "," + br.a +
                                                  "] are not antisymmetric copies"});
  }

  if (!report.ok()) return report;

  // Jacobi over all basis triples
  Gnla g;
  g.depth_ = nu;
  g.names_ = ix.names;
  g.table_ = table;
  std::vector<std::pair<int, std::size_t>> all;
  for (int s = 1; s <= nu; ++s)
    for (std::size_t i = 0; i < ix.names[s - 1].size(); ++i) all.push_back({-s, i});
  for (std::size_t x = 0; x < all.size(); ++x)
    for (std::size_t y = x + 1; y < all.size(); ++y)
      for (std::size_t z = y + 1; z < all.size(); ++z) {
        auto [di, a] = all[x];
        auto [dj, b] = all[y];
        auto [dk, c] = all[z];
        std::size_t target = dim_of(di + dj + dk);
        if (target == 0) continue;
        Vec total(target);
        auto acc = [&](int d1, std::size_t u, int d2, std::size_t v, int d3, std::size_t w) {
          Vec inner = g.bracket_basis(d1, u, d2, v);
          if (inner.empty()) return;
          Vec ew(g.dim(d3));
          ew[w] = 1;
          Vec outer = g.bracket(d1 + d2, inner, d3, ew);
          for (std::size_t t = 0; t < target; ++t) total[t] += outer[t];
        };
        acc(di, a, dj, b, dk, c);
        acc(dj, b, dk, c, di, a);
        acc(dk, c, di, a, dj, b);
        if (!vec_is_zero(total))
          report.items.push_back({"jacobi", "jacobi fails on (" + ix.names[-di - 1][a] + ", " +
                                                ix.names[-dj - 1][b] + ", " +
                                                ix.names[-dk - 1][c] + ")"});
      }
  return report;
}

inline Gnla Gnla::from_spec(const GnlaSpec& spec) {
  ValidationReport report = validate_gnla(spec);
  if (!report.ok()) throw math_error("invalid graded nilpotent Lie algebra:\n" + report.str());
  ValidationReport scratch;
  auto ix = detail::GnlaIndex::build(spec, scratch).value();
  Gnla g;
  g.depth_ = ix.depth;
  g.names_ = ix.names;
  for (const auto& br : spec.brackets) {
    auto [sa, a] = ix.lookup.at(br.a);
    auto [sb, b] = ix.lookup.at(br.b);
    int i = -sa, j = -sb;
    if (br.a == br.b || g.dim(i + j) == 0) continue;
    Vec v(g.dim(i + j));
    for (const auto& [n, c] : br.terms) v[ix.lookup.at(n).second] += c;
    bool flip = (i < j) || (i == j && a > b);
    Key k = flip ? key(j, b, i, a) : key(i, a, j, b);
    if (flip)
      for (Rat& x : v) x = -x;
    if (!vec_is_zero(v)) g.table_[k] = v;
  }
  return g;
}

inline GnlaSpec Gnla::to_spec() const {
  GnlaSpec spec;
  for (int s = 1; s <= depth_; ++s) spec.degrees[-s] = names_[s - 1];
  for (const auto& [k, v] : table_) {
    GnlaSpec::Bracket br;
    br.a = names_[k[0] - 1][k[1]];
    br.b = names_[k[2] - 1][k[3]];
    int target = -static_cast<int>(k[0] + k[2]);
    for (std::size_t t = 0; t < v.size(); ++t)
      if (v[t] != 0) br.terms.push_back({names(target)[t], v[t]});
    if (!br.terms.empty()) spec.brackets.push_back(std::move(br));
  }
  return spec;
}

/// True iff iterated brackets of g_{-1} span every deeper component.
inline bool check_fundamental(const Gnla& g) {
  std::size_t n1 = g.dim(-1);
  // span basis of the previously generated component, starting at g_{-1}
  Matrix prev = Matrix::identity(n1);
  int prev_deg = -1;
  for (int deg = -2; deg >= -g.depth(); --deg) {
    std::size_t nd = g.dim(deg);
    std::vector<Vec> gen;
    for (std::size_t a = 0; a < n1; ++a) {
      Vec ea(n1);
      ea[a] = 1;
      for (std::size_t r = 0; r < prev.rows(); ++r) {
        Vec br = g.bracket(-1, ea, prev_deg, prev.row(r));
        if (!vec_is_zero(br)) gen.push_back(std::move(br));
      }
    }
    Subspace span = Subspace::span_of_rows(gen, nd);
    if (span.dim() != nd) return false;
    prev = span.basis();
    prev_deg = deg;
  }
  return true;
}

}  // namespace tanaka
