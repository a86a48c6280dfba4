#include "borelforge/tower.hpp"

namespace borelforge {

TowerForm tf_make(std::map<Int, Rat> terms, Rat residue) {
  TowerForm out;
  for (auto& [a, q] : terms) {
    if (a < 1) throw UsageError("tower index must be >= 1, got " + int_str(a));
    if (sgn(q) != 0) out.terms.emplace(a, q);
  }
  residue.canonicalize();
  out.residue = residue;
  for (auto& [a, q] : out.terms) {
    (void)a;
    q.canonicalize();
  }
  return out;
}

TowerForm tf_tower(const Int& a, const Rat& q) {
  return tf_make({{a, q}}, Rat(0));
}

TowerForm tf_add(const TowerForm& x, const TowerForm& y) {
  TowerForm out = x;
  out.residue += y.residue;
  for (const auto& [a, q] : y.terms) {
    auto it = out.terms.find(a);
    if (it == out.terms.end()) {
      out.terms.emplace(a, q);
    } else {
      it->second += q;
      if (sgn(it->second) == 0) out.terms.erase(it);
    }
  }
  return out;
}

TowerForm tf_neg(const TowerForm& x) {
  TowerForm out;
  out.residue = -x.residue;
  for (const auto& [a, q] : x.terms) out.terms.emplace(a, Rat(-q));
  return out;
}

TowerForm tf_sub(const TowerForm& x, const TowerForm& y) {
  return tf_add(x, tf_neg(y));
}

TowerForm tf_scale(const Rat& q, const TowerForm& x) {
  TowerForm out;
  if (sgn(q) == 0) return out;
  out.residue = q * x.residue;
  for (const auto& [a, c] : x.terms) out.terms.emplace(a, Rat(q * c));
  return out;
}

TowerForm tf_add_rat(const TowerForm& x, const Rat& q) {
  TowerForm out = x;
  out.residue += q;
  return out;
}

namespace {

// Magnitude bound of one contribution in log2 form: 2^a + c when a tower
// term is involved (a = the tower index, c a coefficient bit bound), plain c
// for the residue. The c's are bit lengths of materialized rationals, so
// |c| < 2^62 always; with that, the comparisons below are exact even when
// the indices themselves are too large to shift by.
struct Log2Bound {
  bool has_tower = false;
  Int a;   // meaningful iff has_tower
  long c = 0;
};

bool fits_shift(const Int& a) { return a >= 0 && a <= 62; }

// Decides 2^a + c1 > c2.
bool tower_gt_plain(const Int& a, long c1, long c2) {
  Int d = Int(c2) - Int(c1);
  if (d < 0) return true;
  if (!fits_shift(a)) return true;  // 2^a >= 2^63 > any coefficient bit bound
  return (Int(1) << a.get_ui()) > d;
}

// Decides c1 > 2^a + c2.
bool plain_gt_tower(long c1, const Int& a, long c2) {
  Int d = Int(c1) - Int(c2);
  if (d <= 0) return false;
  if (!fits_shift(a)) return false;  // 2^a >= 2^63 > any coefficient bit bound
  return d > (Int(1) << a.get_ui());
}

// Decides 2^{a1} + c1 > 2^{a2} + c2.
bool tower_gt_tower(const Int& a1, long c1, const Int& a2, long c2) {
  if (a1 == a2) return c1 > c2;
  if (a1 > a2) {
    Int d = Int(c2) - Int(c1);
    if (d < 0) return true;
    if (!fits_shift(a1)) return true;  // gap 2^{a1}-2^{a2} >= 2^{a1-1} >= 2^62
    Int gap = (Int(1) << a1.get_ui()) - (Int(1) << a2.get_ui());
    return gap > d;
  }
  Int d = Int(c1) - Int(c2);
  if (d <= 0) return false;
  if (!fits_shift(a2)) return false;
  Int gap = (Int(1) << a2.get_ui()) - (Int(1) << a1.get_ui());
  return d > gap;
}

bool bound_gt(const Log2Bound& x, const Log2Bound& y) {
  if (x.has_tower && y.has_tower) return tower_gt_tower(x.a, x.c, y.a, y.c);
  if (x.has_tower) return tower_gt_plain(x.a, x.c, y.c);
  if (y.has_tower) return plain_gt_tower(x.c, y.a, y.c);
  return x.c > y.c;
}

Rat pow22_rat(const Int& a, long bit_budget) {
  if (!fits_shift(a) || (Int(1) << a.get_ui()) > bit_budget)
    throw BudgetExceeded("expansion of 2^(2^" + int_str(a) +
                         ") exceeds bit budget " + std::to_string(bit_budget));
  unsigned long bits = 1UL << a.get_ui();
  Int p;
  mpz_setbit(p.get_mpz_t(), bits);
  return Rat(p);
}

}  // namespace

Rat tf_expand(const TowerForm& x, long bit_budget) {
  Rat acc = x.residue;
  for (const auto& [a, q] : x.terms) acc += q * pow22_rat(a, bit_budget);
  acc.canonicalize();
  return acc;
}

int tf_sign(const TowerForm& x, long bit_budget) {
  if (x.terms.empty()) return sgn(x.residue);

  const auto lead = x.terms.rbegin();
  const Int& a_star = lead->first;
  const Rat& q_star = lead->second;

  long n_other = static_cast<long>(x.terms.size()) - 1 +
                 (sgn(x.residue) != 0 ? 1 : 0);
  if (n_other == 0) return sgn(q_star);

  // Bit lengths of materialized numbers stay far below 2^62 (memory bounds
  // them), which is what makes the huge-index branches above exact.
  Log2Bound lead_lb{true, a_star, log2_lower(q_star)};

  Log2Bound rest_ub;
  bool have = false;
  for (auto it = x.terms.begin(); it != x.terms.end(); ++it) {
    if (it->first == a_star) continue;
    Log2Bound b{true, it->first, log2_upper(it->second)};
    if (!have || bound_gt(b, rest_ub)) rest_ub = b, have = true;
  }
  if (sgn(x.residue) != 0) {
    Log2Bound b{false, Int(0), log2_upper(x.residue)};
    if (!have || bound_gt(b, rest_ub)) rest_ub = b, have = true;
  }
  rest_ub.c += ceil_log2(n_other);

  // |lead| >= 2^(2^a* + lb)  and  |rest| <= n_other * 2^(max contribution);
  // strict inequality of the exponent bounds proves the leading term wins.
  if (bound_gt(lead_lb, rest_ub)) return sgn(q_star);

  return sgn(tf_expand(x, bit_budget));
}

bool tf_abs_ge(const TowerForm& x, const Rat& bound, long bit_budget) {
  if (sgn(bound) < 0) throw UsageError("tf_abs_ge: bound must be >= 0");
  if (tf_sign(tf_add_rat(x, Rat(-bound)), bit_budget) >= 0) return true;
  return tf_sign(tf_add_rat(x, bound), bit_budget) <= 0;
}

int tf_cmp(const TowerForm& x, const TowerForm& y, long bit_budget) {
  return tf_sign(tf_sub(x, y), bit_budget);
}

}  // namespace borelforge
