#pragma once

// Independent brute-force prolongation solver used as a test oracle. Unlike
// the production solver it treats EVERY block of a candidate map as an
// unknown simultaneously (no reconstruction of deeper blocks from the g_{-1}
// block along chosen bracket expressions) and imposes the derivation identity
// over all pairs on the full unknown set.

#include "tanaka/prolong.hpp"

namespace tanaka::testsupport {

struct DenseOracleResult {
  Subspace full_unknown_space;  // kernel in the all-blocks coordinate space
  Subspace g1_projection;       // projected to flattened g_{-1} blocks
  bool projection_injective = false;
};

/// Solves for component k of `state` (components < k must be computed).
inline DenseOracleResult dense_prolong_component(const ProlongedAlgebra& state, int k) {
  const Gnla& base = state.base();
  const std::size_t nu = base.depth();

  // unknown layout: per source depth s = 1..nu a block dim g_{-s} x dim_at(k-s)
  std::vector<std::size_t> offset(nu + 1, 0);
  auto tdim = [&](int d) { return d < -static_cast<int>(nu) ? 0 : state.dim_at(d); };
  for (std::size_t s = 1; s <= nu; ++s)
    offset[s] = offset[s - 1] + base.dim(-static_cast<int>(s)) * tdim(k - static_cast<int>(s));
  const std::size_t unknowns = offset[nu];

  // element of degree k-s from the unknown vector, applied to basis idx of g_{-s}
  auto value_of = [&](const Vec& u, int s, std::size_t idx) {
    std::size_t cols = tdim(k - s);
    Vec v(cols);
    for (std::size_t c = 0; c < cols; ++c) v[c] = u[offset[s - 1] + idx * cols + c];
    return Element{k - s, v};
  };

  std::vector<std::pair<std::pair<int, std::size_t>, std::pair<int, std::size_t>>> pairs;
  for (int i = -1; i >= -static_cast<int>(nu); --i)
    for (std::size_t a = 0; a < base.dim(i); ++a)
      for (int j = i; j >= -static_cast<int>(nu); --j)
        for (std::size_t b = (j == i ? a + 1 : 0); b < base.dim(j); ++b)
          if (k + i + j >= -static_cast<int>(nu)) pairs.push_back({{i, a}, {j, b}});

  std::size_t rows = 0;
  for (const auto& pr : pairs) rows += tdim(k + pr.first.first + pr.second.first);

  Matrix sys(rows, unknowns);
  for (std::size_t t = 0; t < unknowns; ++t) {
    Vec unit(unknowns);
    unit[t] = 1;
    std::size_t row0 = 0;
    for (const auto& pr : pairs) {
      auto [i, a] = pr.first;
      auto [j, b] = pr.second;
      std::size_t out = tdim(k + i + j);
      if (out == 0) continue;
      Vec residual(out);
      // u([a,b])
      if (i + j >= -static_cast<int>(nu)) {
        Vec br = base.bracket_basis(i, a, j, b);
        for (std::size_t m = 0; m < br.size(); ++m) {
          if (br[m] == 0) continue;
          Element v = value_of(unit, -(i + j), m);
          for (std::size_t c = 0; c < out; ++c) residual[c] += br[m] * v.coords[c];
        }
      }
      // -[u(a), b] + [u(b), a]
      Element ua = value_of(unit, -i, a);
      Element eb{j, Vec(base.dim(j))};
      eb.coords[b] = 1;
      Element r1 = ua.degree < 0
                       ? Element{ua.degree + j, base.bracket(ua.degree, ua.coords, j, eb.coords)}
                       : Element{ua.degree + j, state.apply(ua, j, eb.coords)};
      Element ub = value_of(unit, -j, b);
      Element ea{i, Vec(base.dim(i))};
      ea.coords[a] = 1;
      Element r2 = ub.degree < 0
                       ? Element{ub.degree + i, base.bracket(ub.degree, ub.coords, i, ea.coords)}
                       : Element{ub.degree + i, state.apply(ub, i, ea.coords)};
      for (std::size_t c = 0; c < out; ++c)
        residual[c] += -r1.coords[c] + r2.coords[c];
      for (std::size_t c = 0; c < out; ++c) sys(row0 + c, t) = residual[c];
      row0 += out;
    }
  }

  DenseOracleResult res;
  res.full_unknown_space = kernel_basis(sys);

  // project onto the flattened g_{-1} block
  std::size_t g1_cols = base.dim(-1) * tdim(k - 1);
  std::vector<Vec> projected;
  for (std::size_t r = 0; r < res.full_unknown_space.dim(); ++r) {
    Vec full = res.full_unknown_space.basis().row(r);
    projected.push_back(Vec(full.begin(), full.begin() + g1_cols));
  }
  res.g1_projection = Subspace::span_of_rows(projected, g1_cols);
  res.projection_injective = res.g1_projection.dim() == res.full_unknown_space.dim();
  return res;
}

}  // namespace tanaka::testsupport
