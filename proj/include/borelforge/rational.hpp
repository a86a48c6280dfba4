#pragma once
#include <gmpxx.h>

#include <string>

#include "borelforge/errors.hpp"

namespace borelforge {

using Int = mpz_class;
using Rat = mpq_class;

// Number of bits of |x|; 0 for x = 0.
inline long bit_length(const Int& x) {
  if (sgn(x) == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(x.get_mpz_t(), 2));
}

// 2-adic valuation of x != 0.
inline unsigned long val2(const Int& x) {
  return mpz_scan1(x.get_mpz_t(), 0);
}

// Smallest e with n <= 2^e, for n >= 1.
inline long ceil_log2(long n) {
  long e = 0;
  while ((1L << e) < n) ++e;
  return e;
}

// Safe two-sided log2 bounds for a nonzero rational:
//   2^log2_lower(q) <= |q| < 2^log2_upper(q).
// Derived purely from numerator/denominator bit lengths, so they are cheap
// and conservative by at most one bit on each side.
inline long log2_lower(const Rat& q) {
  return bit_length(q.get_num()) - bit_length(q.get_den()) - 1;
}
inline long log2_upper(const Rat& q) {
  return bit_length(q.get_num()) - bit_length(q.get_den()) + 1;
}

inline Int max_int(const Int& a, const Int& b) { return a > b ? a : b; }
inline Int min_int(const Int& a, const Int& b) { return a < b ? a : b; }

// ceil(p/q) for a rational (q > 0 after canonicalization).
inline Int ceil_rat(const Rat& x) {
  Int q;
  mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
  return q;
}

inline Rat rat_abs(const Rat& x) { return sgn(x) < 0 ? Rat(-x) : x; }

// Canonical text form "p/q", or "p" when the denominator is 1.
inline std::string rat_str(const Rat& x) {
  Rat c = x;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline std::string int_str(const Int& x) { return x.get_str(); }

// Parses "p/q" or "p" (optional leading '-'); rejects anything else.
inline Rat rat_parse(const std::string& s) {
  auto bad = [&] { throw IoError("not a rational: '" + s + "'"); };
  if (s.empty()) bad();
  auto digits_ok = [&](const std::string& part, bool sign_ok) {
    if (part.empty()) return false;
    std::size_t i = (sign_ok && part[0] == '-') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i)
      if (part[i] < '0' || part[i] > '9') return false;
    return true;
  };
  std::size_t slash = s.find('/');
  std::string num = s.substr(0, slash == std::string::npos ? s.size() : slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!digits_ok(num, true) || !digits_ok(den, false)) bad();
  Int num_i(num), den_i(den);
  if (sgn(den_i) == 0) bad();
  Rat r(num_i, den_i);
  r.canonicalize();
  return r;
}

inline Int int_parse(const std::string& s) {
  Rat r = rat_parse(s);
  if (r.get_den() != 1) throw IoError("not an integer: '" + s + "'");
  return r.get_num();
}

}  // namespace borelforge
