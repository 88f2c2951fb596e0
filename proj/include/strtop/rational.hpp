#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

#include "strtop/error.hpp"

namespace strtop {

using Rational = mpq_class;
using Integer = mpz_class;

/// p/q in lowest terms; the two-argument mpq constructor does not reduce.
inline Rational fraction(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

/// Always "p/q", also for integers, so serialized output has a single shape.
inline std::string to_string(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto bad = [&] { return ParseError("not a rational: '" + s + "'"); };
  if (s.empty()) throw bad();
  auto slash = s.find('/');
  auto digits = [](std::string_view part) {
    if (!part.empty() && (part[0] == '-' || part[0] == '+')) part.remove_prefix(1);
    if (part.empty()) return false;
    for (char c : part)
      if (c < '0' || c > '9') return false;
    return true;
  };
  Rational q;
  if (slash == std::string::npos) {
    if (!digits(s)) throw bad();
    q = Rational(Integer(s[0] == '+' ? s.substr(1) : s));
  } else {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!digits(num) || !digits(den) || den[0] == '-' || den[0] == '+') throw bad();
    Integer d(den);
    if (d == 0) throw bad();
    q = Rational(Integer(num[0] == '+' ? num.substr(1) : num), d);
    q.canonicalize();
  }
  return q;
}

inline int sign_of(const Rational& q) { return sgn(q); }

inline Rational abs_of(const Rational& q) { return abs(q); }

}  // namespace strtop
