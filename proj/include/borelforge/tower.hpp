#pragma once
#include <map>
#include <string>

#include "borelforge/rational.hpp"

namespace borelforge {

// Canonical symbolic form  sum_a q_a * 2^(2^a) + r  with tower indices a >= 1.
// Values of this shape arise as interval endpoints 2^(2^a) +- a, markers, and
// linear combinations of coordinates; the indices themselves can be large
// integers, so 2^(2^a) must never be materialized on the comparison path.
struct TowerForm {
  std::map<Int, Rat> terms;  // index a -> coefficient q_a, all nonzero
  Rat residue;

  TowerForm() : residue(0) {}
  explicit TowerForm(const Rat& r) : residue(r) {}

  bool operator==(const TowerForm& o) const {
    return terms == o.terms && residue == o.residue;
  }
};

inline long default_bit_budget() { return 1L << 20; }

// Drops zero coefficients and rejects non-positive indices.
TowerForm tf_make(std::map<Int, Rat> terms, Rat residue);

// Single tower term q * 2^(2^a).
TowerForm tf_tower(const Int& a, const Rat& q);

TowerForm tf_add(const TowerForm& x, const TowerForm& y);
TowerForm tf_neg(const TowerForm& x);
TowerForm tf_sub(const TowerForm& x, const TowerForm& y);
TowerForm tf_scale(const Rat& q, const TowerForm& x);
TowerForm tf_add_rat(const TowerForm& x, const Rat& q);

// Exact sign. The leading term decides when a conservative dominance test
// (pure index/bit-length arithmetic) proves it outweighs everything else;
// otherwise the value is expanded in full, provided 2^(max index) <= budget.
// Throws BudgetExceeded when neither route is available.
int tf_sign(const TowerForm& x, long bit_budget = default_bit_budget());

// Exact |value(x)| >= bound, for bound >= 0, via tf_sign on x-bound and x+bound.
bool tf_abs_ge(const TowerForm& x, const Rat& bound,
               long bit_budget = default_bit_budget());

// sign(value(x) - value(y)).
int tf_cmp(const TowerForm& x, const TowerForm& y,
           long bit_budget = default_bit_budget());

// Full expansion to a plain rational; requires 2^(max index) <= budget.
Rat tf_expand(const TowerForm& x, long bit_budget = default_bit_budget());

}  // namespace borelforge
