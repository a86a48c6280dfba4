#include "borelforge/thick.hpp"

namespace borelforge {

namespace {

constexpr long kXiSearchCap = 24;       // 2^24-bit direct expansions at most
constexpr long kMemberScanCap = 1 << 20;
const unsigned long kIndexBitCap = 1UL << 33;  // |a*| capped at 1 GiB

// 2^(2^x) as a plain integer; x is small wherever this is called.
Int pow22(long x) {
  if (x < 0 || x > kXiSearchCap)
    throw ResourceLimit("2^(2^" + std::to_string(x) + ") not materializable");
  Int p;
  mpz_setbit(p.get_mpz_t(), 1UL << x);
  return p;
}

bool pred_separation(long m, long x) {
  // P_m(x): 2^(2^x) - x >= m(1 + m + m^2 (2^(2^(x-1)) + x))
  Int mm(m);
  Int lhs = pow22(x) - x;
  Int rhs = mm * (1 + mm + mm * mm * (pow22(x - 1) + x));
  return lhs >= rhs;
}

bool pred_tail(long m, long x) {
  // 2^(2^(x-1)) >= m(1+m) + x + 2 m^2 (2^(2^(x-2)) + x); needs x >= 2.
  Int mm(m);
  Int lhs = pow22(x - 1);
  Int rhs = mm * (1 + mm) + x + 2 * mm * mm * (pow22(x - 2) + x);
  return lhs >= rhs;
}

}  // namespace

Thresholds xi_thresholds(long m) {
  if (m < 1) throw UsageError("xi: m must be >= 1");
  for (long x = 1; x <= kXiSearchCap - 8; ++x) {
    if (!pred_separation(m, x)) continue;
    for (long y = x; y <= x + 8; ++y)
      if (!pred_separation(m, y))
        throw ResourceLimit("separation predicate not monotone after xi");
    if (!pred_tail(m, x + 8))
      throw ResourceLimit("tail guarantee failed at xi+8");
    Thresholds t;
    t.m = m;
    t.xi = x;
    t.Xi = tf_make({{Int(x), Rat(1)}}, Rat(x));
    return t;
  }
  throw ResourceLimit("xi search exceeded cap");
}

Int family_element(const Int& j, const Int& k) {
  if (j < 0 || k < 0) throw UsageError("family_element: j, k must be >= 0");
  if (j > static_cast<long>(kIndexBitCap))
    throw ResourceLimit("family index 2^" + int_str(j) + " not materializable");
  Int odd = 2 * k + 1;
  mpz_mul_2exp(odd.get_mpz_t(), odd.get_mpz_t(), j.get_ui());
  return odd;
}

namespace {

// 2^(2^a) - a > n, decided from bit lengths: n + a < 2^(2^a) iff
// bitlen(n + a) <= 2^a.
bool interval_clears(const Int& a, const Int& n) {
  Int s = n + a;
  if (sgn(s) <= 0) return true;
  long b = bit_length(s);
  if (a >= 63) return true;  // 2^a >= 2^63 exceeds any bit length
  return (Int(1) << a.get_ui()) >= b;
}

}  // namespace

Int marker_index(const Int& j, const Int& n) {
  if (n < 0) throw UsageError("marker: n must be >= 0");
  // 2^(2^a) - a is increasing in a, so the first clearing element wins.
  for (Int k = 0; k < kMemberScanCap; ++k) {
    Int a = family_element(j, k);
    if (interval_clears(a, n)) return a;
  }
  throw ResourceLimit("marker index scan exceeded cap");
}

TowerForm marker(const Int& j, const Int& n) {
  Int a = marker_index(j, n);
  return tf_make({{a, Rat(1)}}, -Rat(a));
}

bool thick_member(const Int& j, const TowerForm& q, long bit_budget) {
  // Intervals all lie in [3, inf); scan families upward until the interval
  // floor passes q. Cancellation against q's own leading term turns the
  // comparisons into plain residue signs, so each step is cheap.
  if (tf_sign(q, bit_budget) <= 0) return false;
  for (Int k = 0; k < kMemberScanCap; ++k) {
    Int a = family_element(j, k);
    TowerForm lo = tf_make({{a, Rat(1)}}, -Rat(a));
    if (tf_cmp(q, lo, bit_budget) < 0) return false;
    TowerForm hi = tf_make({{a, Rat(1)}}, Rat(a));
    if (tf_cmp(q, hi, bit_budget) <= 0) return true;
  }
  throw ResourceLimit("thick membership scan exceeded cap");
}

bool trimmed_member(const Int& j, const Int& n, const TowerForm& q,
                    long bit_budget) {
  if (!thick_member(j, q, bit_budget)) return false;
  if (q == marker(j, n)) return false;
  // |q| > n, strictly: q - n > 0 or q + n < 0.
  return tf_sign(tf_add_rat(q, -Rat(n)), bit_budget) > 0 ||
         tf_sign(tf_add_rat(q, Rat(n)), bit_budget) < 0;
}

TowerForm canonical_element(const Int& j, const Int& n) {
  return tf_add_rat(marker(j, n), Rat(1, 2));
}

Int cantor_pair(const Int& x, const Int& y) {
  Int s = x + y;
  return s * (s + 1) / 2 + y;
}

void cantor_unpair(const Int& z, Int& x, Int& y) {
  if (z < 0) throw UsageError("cantor_unpair: negative code");
  // s = floor((sqrt(8z+1)-1)/2), then y = z - s(s+1)/2, x = s - y.
  Int d = 8 * z + 1;
  Int r;
  mpz_sqrt(r.get_mpz_t(), d.get_mpz_t());
  Int s = (r - 1) / 2;
  Int t = s * (s + 1) / 2;
  y = z - t;
  x = s - y;
}

Int node_family_index(const std::vector<Int>& path) {
  Int code = 0;
  for (const Int& i : path) {
    if (i < 0) throw UsageError("path entries must be >= 0");
    code = cantor_pair(code, i) + 1;
  }
  return code;
}

std::vector<Int> node_family_decode(const Int& code) {
  if (code < 0) throw UsageError("node_family_decode: negative code");
  std::vector<Int> out;
  Int c = code;
  while (c > 0) {
    Int prev, i;
    cantor_unpair(c - 1, prev, i);
    out.insert(out.begin(), i);
    c = prev;
  }
  return out;
}

namespace {

bool entries_small(const std::vector<Int>& v) {
  for (const Int& e : v)
    if (e > 7) return false;
  return true;
}

// Bijective base-9 over digits entry+1 in [1,8]; injective over all cores.
Int base9_value(const std::vector<Int>& core) {
  Int acc = 0;
  for (const Int& e : core) acc = acc * 9 + (e + 1);
  return acc;
}

}  // namespace

Int family_assign_ext(const std::vector<Int>& core, const Int& e) {
  if (!core.empty() && sgn(core.back()) == 0)
    throw UsageError("family_assign_ext: core has trailing zero");
  for (const Int& x : core)
    if (x < 0) throw UsageError("path entries must be >= 0");
  if (e < 0) throw UsageError("family_assign_ext: e must be >= 0");

  bool small = entries_small(core);
  if (small && e <= 3) return 8 * base9_value(core) + e;
  if (e >= 4 && small && core.size() <= 2)
    return 8 * ((e - 4) * 128 + base9_value(core)) + 4;
  if (e >= 4 && small && core.size() <= 4)
    return 8 * ((e - 4) * 8192 + base9_value(core)) + 5;
  if (e >= 4) return 8 * cantor_pair(node_family_index(core), e - 4) + 6;
  std::vector<Int> full = core;
  for (Int i = 0; i < e; ++i) full.push_back(0);
  return 8 * node_family_index(full) + 7;
}

Int family_assign(const std::vector<Int>& path) {
  std::size_t n = path.size();
  while (n > 0 && sgn(path[n - 1]) == 0) --n;
  std::vector<Int> core(path.begin(), path.begin() + n);
  return family_assign_ext(core, Int(path.size() - n));
}

}  // namespace borelforge
