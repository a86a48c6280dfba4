#pragma once
#include <map>
#include <vector>

#include "borelforge/thick.hpp"

namespace borelforge {

// The inductive construction: the root carries the zero point with level 0;
// the child s+i of a node s refines the parent's point on a fresh window of
// coordinates, plants a marker at coordinate M_i, and continues canonically
// above. Children of a common parent get separated balls, certified by an
// exact value gap >= 1/4 at the smaller sibling's marker coordinate.

// Child index decoded by two inverse Cantor pairings:
//   (t, v) = unpair(i), (w-1, r-1) = unpair(t)
// giving selector v >= 0, window length w >= 1, resolution r >= 1.
struct ChildShape {
  Int v, w, r;
};
ChildShape child_shape(const Int& i);

// Sibling marker coordinates M_i = max(l_s + w_i, M_{i-1} + 1, l_s + 1)
// collapse to the closed form l_s + i + 1 because w_i <= i + 1 for every i
// (each Cantor unpairing is bounded by its input). Levels likewise:
// max(l_s + i + 1, M_i + 1, 4) = max(l_s + i + 2, 4).
Int sibling_marker_coord(const Int& parent_level, const Int& i);
Int child_level(const Int& parent_level, const Int& i);

// One coordinate of the child s+i, for n >= parent level:
//   n in [l_s, P): grid value selected by v's mixed-radix digit,
//   n = M_i:       marker(j, n),
//   otherwise:     canonical_element(j, n),
// where j is the parent's assigned family. Grid values are
// marker(j,n) + 1/2 + g * 2^-r within the first admissible interval; at a
// coordinate matching an earlier sibling's marker the enumeration starts at
// offset 1/4 from the marker instead (the separation gap).
TowerForm child_coord(const std::vector<Int>& parent_path,
                      const Int& parent_level, const Int& i, const Int& n);

// Same, with the parent family precomputed (family_assign(parent_path)).
TowerForm child_coord_assigned(const Int& parent_family,
                               const Int& parent_level, const Int& i,
                               const Int& n);

// Leftover selector after consuming the window digits; nonzero means the
// selector addresses a tuple beyond the grid (SelectorExhausted on build).
Int selector_remainder(const Int& parent_family, const Int& parent_level,
                       const Int& i);

struct TreeNode {
  std::vector<Int> path;
  Int level;
  Int marker_coord;                 // meaningful iff !path.empty()
  Int parent_level;
  Int parent_family;
  std::map<Int, TowerForm> window;  // coords [parent_level, parent_level + w)
};

TreeNode make_root();
TreeNode make_child(const TreeNode& parent, const Int& i);

// Level of the node at `path` (walking the level recurrence from the root).
Int level_of_path(const std::vector<Int>& path);

// Coordinate n of the node's point: inherited below the parent level
// (delegated to the owning ancestor segment), own rule at and above it.
// The root's point is identically zero.
TowerForm path_point_coord(const std::vector<Int>& path, const Int& n);

struct BallPrefix {
  std::vector<TowerForm> values;  // coordinates 0 .. exponent-1
  Int exponent;                   // membership: |x(n) - values[n]| <= 2^-exponent
};
BallPrefix ball(const TreeNode& node);
bool ball_contains(const BallPrefix& b, const std::vector<TowerForm>& coords);

// Infinite sequence represented by a finite stem extended canonically by
// zeros; stems are stored without trailing zeros so equal extensions compare
// equal.
struct Branch {
  std::vector<Int> stem;
  static Branch of(std::vector<Int> raw);
};
int branch_cmp(const Branch& a, const Branch& b);  // lex on extensions

// Exact coordinate k of the limit point along the branch: the first prefix
// node whose level exceeds k fixes it (deeper prefixes inherit it exactly).
TowerForm eval_coordinate(const Branch& b, const Int& k);

// Memoizing evaluator for repeated coordinates of one branch.
class PointEvaluator {
 public:
  explicit PointEvaluator(Branch b) : branch_(std::move(b)) {}
  const TowerForm& at(const Int& k);
  const Branch& branch() const { return branch_; }

 private:
  Branch branch_;
  std::map<Int, TowerForm> memo_;
};

struct SeparationCertificate {
  Int coordinate;
  Rat gap;             // exact |z_i(n) - z_i'(n)|, always >= 1/4
  TowerForm value_lo;  // the two children's values at that coordinate
  TowerForm value_hi;
  Int level_lo, level_hi;
};

// Witness that children i and i' of the node at parent_path have disjoint
// balls: at n = M_min(i,i') the values split by >= 1/4 > 2^-l_i + 2^-l_i'.
SeparationCertificate disjointness_certificate(
    const std::vector<Int>& parent_path, const Int& i, const Int& i2);

}  // namespace borelforge
