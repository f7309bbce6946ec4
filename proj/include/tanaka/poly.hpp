#pragma once

#include "tanaka/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tanaka {

using ExpVec = std::vector<std::uint32_t>;

/// Multivariate polynomial with exact rational coefficients over a fixed
/// number of variables. Zero coefficients are never stored.
class Poly {
public:
  explicit Poly(std::size_t nvars = 0) : nvars_(nvars) {}

  static Poly constant(std::size_t nvars, Rat c) {
    Poly p(nvars);
    p.add_term(ExpVec(nvars, 0), std::move(c));
    return p;
  }

  static Poly variable(std::size_t nvars, std::size_t idx) {
    ExpVec e(nvars, 0);
    e.at(idx) = 1;
    return monomial(nvars, std::move(e), 1);
  }

  static Poly monomial(std::size_t nvars, ExpVec e, Rat c) {
    if (e.size() != nvars) throw std::invalid_argument("exponent length mismatch");
    Poly p(nvars);
    p.add_term(std::move(e), std::move(c));
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<ExpVec, Rat>& terms() const { return terms_; }

  Rat coeff(const ExpVec& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rat(0) : it->second;
  }

  void add_term(ExpVec e, Rat c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
      terms_.emplace(std::move(e), std::move(c));
    } else {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  Poly& operator+=(const Poly& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) {
      auto it = terms_.find(e);
      if (it == terms_.end()) {
        terms_.emplace(e, c);
      } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }

  Poly& operator-=(const Poly& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) {
      auto it = terms_.find(e);
      if (it == terms_.end()) {
        terms_.emplace(e, -c);
      } else {
        it->second -= c;
        if (it->second == 0) terms_.erase(it);
      }
    }
    return *this;
  }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }

  Poly operator-() const {
    Poly p(nvars_);
    for (const auto& [e, c] : terms_) p.terms_.emplace(e, -c);
    return p;
  }

  friend Poly operator*(const Poly& a, const Poly& b) {
    a.check_vars(b);
    Poly p(a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
      for (const auto& [eb, cb] : b.terms_) {
        ExpVec e(a.nvars_);
        for (std::size_t i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
        p.add_term(std::move(e), ca * cb);
      }
    return p;
  }

  friend Poly operator*(const Rat& c, const Poly& a) {
    Poly p(a.nvars_);
    if (c == 0) return p;
    for (const auto& [e, k] : a.terms_) p.terms_.emplace(e, c * k);
    return p;
  }

  Poly derivative(std::size_t var) const {
    Poly p(nvars_);
    for (const auto& [e, c] : terms_) {
      if (e.at(var) == 0) continue;
      ExpVec d = e;
      --d[var];
      p.add_term(std::move(d), c * e[var]);
    }
    return p;
  }

  Rat eval(const Vec& point) const {
    if (point.size() != nvars_) throw std::invalid_argument("point dimension mismatch");
    Rat out = 0;
    for (const auto& [e, c] : terms_) {
      Rat t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (std::uint32_t k = 0; k < e[i]; ++k) t *= point[i];
      out += t;
    }
    return out;
  }

  /// Substitutes variable i by image polynomial images[i].
  Poly substitute(const std::vector<Poly>& images) const {
    if (images.size() != nvars_) throw std::invalid_argument("substitution arity mismatch");
    std::size_t target_vars = images.empty() ? 0 : images[0].nvars();
    Poly out(target_vars);
    for (const auto& [e, c] : terms_) {
      Poly t = Poly::constant(target_vars, c);
      for (std::size_t i = 0; i < nvars_; ++i)
        for (std::uint32_t k = 0; k < e[i]; ++k) t = t * images[i];
      out += t;
    }
    return out;
  }

  std::optional<std::size_t> min_total_degree() const {
    std::optional<std::size_t> best;
    for (const auto& [e, c] : terms_) {
      std::size_t d = 0;
      for (auto x : e) d += x;
      if (!best || d < *best) best = d;
    }
    return best;
  }

  std::optional<std::size_t> max_total_degree() const {
    std::optional<std::size_t> best;
    for (const auto& [e, c] : terms_) {
      std::size_t d = 0;
      for (auto x : e) d += x;
      if (!best || d > *best) best = d;
    }
    return best;
  }

  std::size_t term_count() const { return terms_.size(); }

  static Poly parse(std::string_view text, const std::vector<std::string>& vars);
  std::string str(const std::vector<std::string>& vars) const;

  bool operator==(const Poly&) const = default;

private:
  void check_vars(const Poly& o) const {
    if (o.nvars_ != nvars_) throw std::invalid_argument("polynomial variable-count mismatch");
  }

  std::size_t nvars_;
  std::map<ExpVec, Rat> terms_;
};

namespace detail {

class PolyParser {
public:
  PolyParser(std::string_view s, const std::vector<std::string>& vars) : s_(s), vars_(vars) {}

  Poly parse() {
    Poly p = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return p;
  }

private:
  [[noreturn]] void fail(const std::string& why) const {
    throw parse_error("polynomial parse error at position " + std::to_string(pos_) + ": " + why +
                      " in '" + std::string(s_) + "'");
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  bool eat(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  Poly expr() {
    bool neg = false;
    skip_ws();
    if (eat('-')) neg = true;
    else eat('+');
    Poly acc = term();
    if (neg) acc = -acc;
    for (;;) {
      skip_ws();
      if (eat('+')) acc += term();
      else if (eat('-')) acc -= term();
      else break;
    }
    return acc;
  }

  // factors juxtaposed or joined by '*'
  Poly term() {
    Poly acc = factor();
    for (;;) {
      skip_ws();
      if (eat('*')) {
        acc = acc * factor();
        continue;
      }
      if (pos_ < s_.size() &&
          (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '(')) {
        acc = acc * factor();
        continue;
      }
      break;
    }
    return acc;
  }

  Poly factor() {
    skip_ws();
    if (pos_ >= s_.size()) fail("expected factor");
    Poly base(vars_.size());
    if (s_[pos_] == '(') {
      ++pos_;
      base = expr();
      if (!eat(')')) fail("expected ')'");
    } else if (std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (pos_ < s_.size() && s_[pos_] == '/') {
        ++pos_;
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
          fail("expected denominator digits");
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
      base = Poly::constant(vars_.size(), parse_rational(s_.substr(start, pos_ - start)));
    } else if (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      std::string name(s_.substr(start, pos_ - start));
      std::size_t idx = vars_.size();
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          idx = i;
          break;
        }
      if (idx == vars_.size()) fail("unknown variable '" + name + "'");
      base = Poly::variable(vars_.size(), idx);
    } else {
      fail("unexpected character");
    }
    skip_ws();
    if (eat('^')) {
      skip_ws();
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_])))
        fail("expected exponent");
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      unsigned long k = std::stoul(std::string(s_.substr(start, pos_ - start)));
      Poly out = Poly::constant(vars_.size(), 1);
      for (unsigned long i = 0; i < k; ++i) out = out * base;
      return out;
    }
    return base;
  }

  std::string_view s_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Poly Poly::parse(std::string_view text, const std::vector<std::string>& vars) {
  return detail::PolyParser(text, vars).parse();
}

inline std::string Poly::str(const std::vector<std::string>& vars) const {
  if (vars.size() != nvars_) throw std::invalid_argument("variable name count mismatch");
  if (terms_.empty()) return "0";
  // graded order, then reverse-lex, for stable readable output
  std::vector<std::pair<ExpVec, Rat>> ts(terms_.begin(), terms_.end());
  std::sort(ts.begin(), ts.end(), [](const auto& a, const auto& b) {
    std::size_t da = 0, db = 0;
    for (auto x : a.first) da += x;
    for (auto x : b.first) db += x;
    if (da != db) return da < db;
    return a.first > b.first;
  });
  std::string out;
  for (const auto& [e, c] : ts) {
    bool first = out.empty();
    Rat a = c;
    if (a < 0) {
      out += first ? "-" : " - ";
      a = -a;
    } else if (!first) {
      out += " + ";
    }
    std::string mono;
    for (std::size_t i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars[i];
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += rat_str(a);
    } else {
      if (a != 1) out += rat_str(a) + "*";
      out += mono;
    }
  }
  return out;
}

}  // namespace tanaka
