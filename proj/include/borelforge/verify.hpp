#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "borelforge/tree.hpp"

namespace borelforge {

// One separation-lemma instance: n <= m pairwise distinct tree paths (hence
// pairwise distinct thick families under the Cantor path coding), a
// coefficient per path from [-m, m] with |lambda| >= 1/m, and a point per
// path from its family's thick set, at least one of magnitude > Xi_m.
struct Lemma1Entry {
  std::vector<Int> path;
  Rat lambda;
  TowerForm point;
};

struct Lemma1Instance {
  long m = 0;
  std::vector<Lemma1Entry> entries;
};

struct Lemma1Verdict {
  bool ok = false;
  TowerForm sum;  // exact witness
};

// Validates the instance (InvalidInstance names the violated clause), then
// decides |sum lambda_i x_i| >= m + 1 exactly.
Lemma1Verdict lemma1_check(const Lemma1Instance& inst,
                           long bit_budget = default_bit_budget());

// Deterministic fuzz: `trials` random valid instances (interval endpoints,
// canonical points, and dyadic grid points; one point forced beyond Xi_m),
// each asserted through lemma1_check. Returns the full JSON-lines report;
// failures out-param counts violations (0 unless the library is defective).
std::string lemma1_fuzz(long trials, long m_max, long a_max,
                        unsigned long long seed, long& failures,
                        long bit_budget = default_bit_budget());

// Smallest r making depth-r restriction injective on E, and the max level
// among the depth-r prefixes.
struct PrefixStats {
  Int r;
  Int l;
};
PrefixStats r_and_l(const std::vector<Branch>& E);

struct CombinationSpec {
  long m = 0;
  std::vector<Branch> stems;
  std::vector<Rat> lambda;
};

struct Claim2Line {
  Int k;
  TowerForm value;
  bool ok;
};

struct Claim2Report {
  PrefixStats prefix;
  Int threshold;  // max(l_E, Xi_m)
  std::vector<Claim2Line> lines;
  long failures = 0;
};

// Exact coordinate lower bound |sum lambda(s) eval(s,k)| >= 1 at each listed
// k. Every k must exceed max(l_E, Xi_m) (RangeTooLow echoes the threshold).
Claim2Report claim2_check_at(const CombinationSpec& spec,
                             const std::vector<Int>& ks,
                             long bit_budget = default_bit_budget());
Claim2Report claim2_check_range(const CombinationSpec& spec, const Int& k_from,
                                long k_count,
                                long bit_budget = default_bit_budget());

// Validation shared with the hull module; throws InvalidInstance.
void validate_combination(const CombinationSpec& spec);

// Exact integral threshold max(l_E, Xi_m); requires Xi_m materializable.
Int combination_threshold(const CombinationSpec& spec, PrefixStats* stats_out);

struct TreeCheckStats {
  long nodes = 0;
  long sibling_pairs = 0;
  long containment_checks = 0;
  long density_targets = 0;
  long failures = 0;
};

// Walks the tree to (depth, fanout): separation certificates for every
// sibling pair, the level growth condition, containment of every stored
// window coordinate (plus marker and a canonical sample) in the trimmed set,
// and the finite density surrogate at resolutions r <= density_r on the
// two-coordinate window of each node up to density_depth.
TreeCheckStats verify_tree(long depth, long fanout, long density_r,
                           long density_depth,
                           const std::function<void(const std::string&)>& on_fail);

}  // namespace borelforge
