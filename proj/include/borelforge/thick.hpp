#pragma once
#include <vector>

#include "borelforge/tower.hpp"

namespace borelforge {

// Family A_j = {2^j * (2k+1) : k >= 0} — the 2-adic valuation partition of
// the positive integers. The thick set with index j is the union of the
// closed intervals I_a = [2^(2^a) - a, 2^(2^a) + a] over a in A_j.

// Thresholds for the separation lemma: xi_m is the smallest x >= 1 such that
//   P_m(x):  2^(2^x) - x >= m * (1 + m + m^2 * (2^(2^(x-1)) + x))
// holds, and Xi_m = 2^(2^xi_m) + xi_m.
struct Thresholds {
  long m = 0;
  long xi = 0;
  TowerForm Xi;
};

// Smallest xi with P_m, plus a verified tail guarantee: P_m checked directly
// for xi <= x <= xi+8 and the squaring-induction sufficient condition
//   2^(2^(x-1)) >= m(1+m) + x + 2 m^2 (2^(2^(x-2)) + x)
// checked at x = xi+8.
Thresholds xi_thresholds(long m);

// k-th element of A_j (k >= 0).
Int family_element(const Int& j, const Int& k);

// Smallest a in A_j with 2^(2^a) - a > n; n >= 0.
Int marker_index(const Int& j, const Int& n);

// The marker t = 2^(2^a*) - a* at that index: the left endpoint of the first
// interval of family j lying entirely above n.
TowerForm marker(const Int& j, const Int& n);

// Membership q in the thick set of family j (union of the I_a, a in A_j).
bool thick_member(const Int& j, const TowerForm& q,
                  long bit_budget = default_bit_budget());

// Membership in the trimmed set: thick, not the marker, and |q| > n.
bool trimmed_member(const Int& j, const Int& n, const TowerForm& q,
                    long bit_budget = default_bit_budget());

// marker(j,n) + 1/2 — a fixed trimmed representative (interval half-length
// a* >= 1 keeps it inside I_{a*}).
TowerForm canonical_element(const Int& j, const Int& n);

// Bijection between finite paths and naturals via iterated Cantor pairing:
// code(empty) = 0, code(s + i) = pair(code(s), i) + 1.
Int cantor_pair(const Int& x, const Int& y);
void cantor_unpair(const Int& z, Int& x, Int& y);
Int node_family_index(const std::vector<Int>& path);
std::vector<Int> node_family_decode(const Int& code);

// Injection from paths to family indices used by the tree construction.
// Unlike the Cantor bijection it keeps indices desk-scale on the reachable
// set of paths (bushy shallow paths and long zero extensions); distinctness
// of per-node families is all the construction needs. Case split on the
// trailing-zero run length e and the remaining core:
//   tag e (e <= 3, entries <= 7):            8 * base9(core)                + e
//   tag 4 (e >= 4, |core| <= 2, entries<=7): 8 * ((e-4)*128  + base9(core)) + 4
//   tag 5 (e >= 4, |core| <= 4, entries<=7): 8 * ((e-4)*8192 + base9(core)) + 5
//   tag 6 (e >= 4, otherwise):               8 * pair(code(core), e-4)      + 6
//   tag 7 (e <= 3, otherwise):               8 * code(path)                 + 7
// where base9 is bijective base-9 over digits entry+1 in [1,8].
Int family_assign(const std::vector<Int>& path);

// Same, with the path given as (core without trailing zeros, zero-run e).
Int family_assign_ext(const std::vector<Int>& core, const Int& e);

}  // namespace borelforge
