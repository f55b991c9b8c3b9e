#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace abelquot {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using QVec = std::vector<Rational>;

inline BigInt num(const Rational& x) { return boost::multiprecision::numerator(x); }
inline BigInt den(const Rational& x) { return boost::multiprecision::denominator(x); }

inline BigInt floor_div(const BigInt& a, const BigInt& b) {
  BigInt q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline BigInt floor(const Rational& x) { return floor_div(num(x), den(x)); }

/// Representative of x modulo 1 in [0, 1).
inline Rational frac(const Rational& x) { return x - Rational(floor(x)); }

inline QVec frac(QVec v) {
  for (auto& x : v) x = frac(x);
  return v;
}

inline bool is_integer(const Rational& x) { return den(x) == 1; }

inline BigInt gcd(BigInt a, BigInt b) { return boost::multiprecision::gcd(a, b); }

inline BigInt lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return boost::multiprecision::abs(a / gcd(a, b) * b);
}

/// Least common multiple of the denominators; the order of v in (Q/Z)^n.
inline BigInt common_denominator(const QVec& v) {
  BigInt d = 1;
  for (const auto& x : v) d = lcm(d, den(x));
  return d;
}

inline bool is_zero_mod_one(const QVec& v) {
  for (const auto& x : v)
    if (!is_integer(x)) return false;
  return true;
}

inline bool lex_less(const QVec& a, const QVec& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

inline std::string to_string(const Rational& x) {
  if (den(x) == 1) return num(x).str();
  return num(x).str() + "/" + den(x).str();
}

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses "p/q" or "p". Rejects non-reduced fractions and non-positive denominators.
inline Rational parse_rational(std::string_view text) {
  auto parse_int = [&](std::string_view s) -> BigInt {
    if (s.empty()) throw ParseError("empty integer in rational '" + std::string(text) + "'");
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) throw ParseError("bad integer in rational '" + std::string(text) + "'");
    for (std::size_t j = i; j < s.size(); ++j)
      if (s[j] < '0' || s[j] > '9') throw ParseError("bad digit in rational '" + std::string(text) + "'");
    return BigInt(std::string(s[0] == '+' ? s.substr(1) : s));
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  BigInt p = parse_int(text.substr(0, slash));
  BigInt q = parse_int(text.substr(slash + 1));
  if (q <= 0) throw ParseError("non-positive denominator in '" + std::string(text) + "'");
  if (gcd(p, q) != 1) throw ParseError("fraction not reduced: '" + std::string(text) + "'");
  return Rational(p, q);
}

}  // namespace abelquot
