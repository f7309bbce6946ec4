#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tanaka {

/// Arbitrary-precision integer and rational scalars. `Rat` is always kept in
/// lowest terms with a positive denominator; all arithmetic is exact.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

using Vec = std::vector<Rat>;

/// Raised on malformed input documents (rationals, polynomials, json fields).
class parse_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation detects a mathematical inconsistency in its
/// input (invalid algebra, irregular point, reduction outside a component...).
class math_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exact quotient of two integers; normalizes sign and lowest terms.
inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw math_error("division by zero");
  return Rat(num) / Rat(den);
}

/// Parses "p" or "p/q" with optional sign and surrounding whitespace.
inline Rat parse_rational(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  s = s.substr(b, e - b);
  if (s.empty()) throw parse_error("empty rational literal");
  auto parse_int = [](std::string_view t) -> Int {
    std::size_t i = 0;
    bool neg = false;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) neg = t[i++] == '-';
    if (i == t.size()) throw parse_error("missing digits in rational literal");
    Int v = 0;
    for (; i < t.size(); ++i) {
      if (t[i] < '0' || t[i] > '9')
        throw parse_error("invalid character in rational literal: '" + std::string(t) + "'");
      v = v * 10 + (t[i] - '0');
    }
    return neg ? Int(-v) : v;
  };
  auto slash = s.find('/');
  if (slash == std::string_view::npos) return Rat(parse_int(s));
  Int num = parse_int(s.substr(0, slash));
  Int den = parse_int(s.substr(slash + 1));
  if (den == 0) throw parse_error("zero denominator in rational literal");
  return make_rat(num, den);
}

/// Formats as "p" or "p/q".
inline std::string rat_str(const Rat& r) {
  std::string out = numerator(r).str();
  if (denominator(r) != 1) out += "/" + denominator(r).str();
  return out;
}

inline Vec vec_zero(std::size_t n) { return Vec(n); }

inline bool vec_is_zero(const Vec& v) {
  for (const Rat& x : v)
    if (x != 0) return false;
  return true;
}

inline void vec_add_scaled(Vec& dst, const Rat& c, const Vec& src) {
  if (c == 0) return;
  if (dst.size() != src.size()) throw std::invalid_argument("vector length mismatch");
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += c * src[i];
}

inline Vec vec_sub(Vec a, const Vec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vector length mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

}  // namespace tanaka
