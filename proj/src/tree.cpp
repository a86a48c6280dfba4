#include "borelforge/tree.hpp"

namespace borelforge {

namespace {

constexpr long kResolutionCap = 62;  // 2^r materialized in grid arithmetic

struct GridSlot {
  Int a_star;
  Int g_cut;  // first admissible grid integer
  Int g_hi;   // last admissible grid integer
};

// Grid {marker + 1/2 + g * 2^-r} intersected with the first admissible
// interval I_{a*} = [marker, marker + 2 a*]. Offsets run over (0, 2 a*];
// with the avoid rule they start at 1/4 instead, so a value at an earlier
// sibling's marker coordinate keeps distance >= 1/4 from the marker here.
GridSlot grid_slot(const Int& j, const Int& n, const Int& r, bool avoid) {
  if (r < 1) throw UsageError("grid resolution must be >= 1");
  if (r > kResolutionCap)
    throw ResourceLimit("grid resolution 2^-" + int_str(r) + " too fine");
  unsigned long re = r.get_ui();
  GridSlot s;
  s.a_star = marker_index(j, n);
  Int half = Int(1) << (re - 1);        // 2^(r-1)
  s.g_hi = 2 * s.a_star * (Int(1) << re) - half;
  s.g_cut = avoid ? Int(-(Int(1) << re) / 4) : Int(-half + 1);
  return s;
}

Rat grid_offset(const Int& g, const Int& r) {
  unsigned long re = r.get_ui();
  Rat off(g, Int(1) << re);
  off.canonicalize();
  return off + Rat(1, 2);
}

Int grid_count(const GridSlot& s) { return s.g_hi - s.g_cut + 1; }

}  // namespace

ChildShape child_shape(const Int& i) {
  if (i < 0) throw UsageError("child index must be >= 0");
  ChildShape s;
  Int t;
  cantor_unpair(i, t, s.v);
  Int w1, r1;
  cantor_unpair(t, w1, r1);
  s.w = w1 + 1;
  s.r = r1 + 1;
  return s;
}

Int sibling_marker_coord(const Int& parent_level, const Int& i) {
  return parent_level + i + 1;
}

Int child_level(const Int& parent_level, const Int& i) {
  return max_int(parent_level + i + 2, Int(4));
}

namespace {

// Shared digit walk: the v-th window tuple assigns coordinate n (ascending
// from l_s) the digit d_n of v in the mixed radix of per-coordinate grid
// sizes. Returns the value at `n_want`, or the selector remainder when
// n_want < 0.
TowerForm window_walk(const Int& j, const Int& parent_level, const Int& i,
                      const Int& n_want, Int* remainder_out) {
  ChildShape shape = child_shape(i);
  Int P = parent_level + shape.w;
  Int v = shape.v;
  for (Int n = parent_level; n < P; ++n) {
    // Earlier siblings i' < i put markers at l_s + i' + 1.
    bool avoid = n >= parent_level + 1 && n <= parent_level + i;
    GridSlot slot = grid_slot(j, n, shape.r, avoid);
    Int count = grid_count(slot);
    Int digit = v % count;
    v /= count;
    if (remainder_out == nullptr && n == n_want) {
      Int g = slot.g_cut + digit;
      TowerForm base = tf_make({{slot.a_star, Rat(1)}}, -Rat(slot.a_star));
      return tf_add_rat(base, grid_offset(g, shape.r));
    }
  }
  if (remainder_out != nullptr) {
    *remainder_out = v;
    return TowerForm();
  }
  throw UsageError("window_walk: coordinate outside window");
}

}  // namespace

TowerForm child_coord_assigned(const Int& parent_family,
                               const Int& parent_level, const Int& i,
                               const Int& n) {
  if (n < parent_level)
    throw UsageError("child_coord: coordinate below parent level");
  ChildShape shape = child_shape(i);
  Int P = parent_level + shape.w;
  Int M = sibling_marker_coord(parent_level, i);
  if (n < P) return window_walk(parent_family, parent_level, i, n, nullptr);
  if (n == M) return marker(parent_family, n);
  return canonical_element(parent_family, n);
}

TowerForm child_coord(const std::vector<Int>& parent_path,
                      const Int& parent_level, const Int& i, const Int& n) {
  return child_coord_assigned(family_assign(parent_path), parent_level, i, n);
}

Int selector_remainder(const Int& parent_family, const Int& parent_level,
                       const Int& i) {
  Int rem;
  window_walk(parent_family, parent_level, i, Int(-1), &rem);
  return rem;
}

TreeNode make_root() {
  TreeNode n;
  n.level = 0;
  n.marker_coord = -1;
  n.parent_level = 0;
  n.parent_family = -1;
  return n;
}

TreeNode make_child(const TreeNode& parent, const Int& i) {
  if (i < 0) throw UsageError("child index must be >= 0");
  TreeNode c;
  c.path = parent.path;
  c.path.push_back(i);
  c.parent_level = parent.level;
  c.parent_family = family_assign(parent.path);
  c.level = child_level(parent.level, i);
  c.marker_coord = sibling_marker_coord(parent.level, i);

  Int rem = selector_remainder(c.parent_family, parent.level, i);
  if (sgn(rem) != 0)
    throw SelectorExhausted("selector leaves remainder " + int_str(rem) +
                            " beyond the window grid for child " + int_str(i));
  ChildShape shape = child_shape(i);
  for (Int n = parent.level; n < parent.level + shape.w; ++n)
    c.window.emplace(n, window_walk(c.parent_family, parent.level, i, n,
                                    nullptr));
  return c;
}

Int level_of_path(const std::vector<Int>& path) {
  Int l = 0;
  for (const Int& i : path) l = child_level(l, i);
  return l;
}

TowerForm path_point_coord(const std::vector<Int>& path, const Int& n) {
  if (n < 0) throw UsageError("coordinate must be >= 0");
  if (path.empty()) return TowerForm(Rat(0));  // the root's point is 0
  // Constraining depth: the first prefix whose level exceeds n owns the
  // coordinate; if none does, the node's own segment still defines every
  // coordinate at or above its parent level.
  Int l = 0;
  std::size_t depth = 0;
  for (; depth < path.size(); ++depth) {
    Int next = child_level(l, path[depth]);
    if (next > n) break;
    l = next;
  }
  if (depth == path.size()) {
    depth = path.size() - 1;
    l = level_of_path(std::vector<Int>(path.begin(), path.end() - 1));
  }
  std::vector<Int> parent(path.begin(), path.begin() + depth);
  return child_coord(parent, l, path[depth], n);
}

BallPrefix ball(const TreeNode& node) {
  BallPrefix b;
  b.exponent = node.level;
  if (node.level > (1 << 16))
    throw ResourceLimit("ball prefix of length " + int_str(node.level) +
                        " not materializable");
  for (Int n = 0; n < node.level; ++n)
    b.values.push_back(path_point_coord(node.path, n));
  return b;
}

bool ball_contains(const BallPrefix& b, const std::vector<TowerForm>& coords) {
  if (coords.size() < b.values.size())
    throw UsageError("ball_contains: too few coordinates");
  if (b.exponent > kResolutionCap)
    throw ResourceLimit("ball radius 2^-" + int_str(b.exponent) + " too fine");
  Rat radius(Int(1), Int(1) << b.exponent.get_ui());
  radius.canonicalize();
  for (std::size_t k = 0; k < b.values.size(); ++k) {
    TowerForm diff = tf_sub(coords[k], b.values[k]);
    // |diff| <= radius, i.e. not(|diff| >= radius) or |diff| == radius.
    if (tf_abs_ge(diff, radius) &&
        tf_sign(tf_add_rat(diff, -radius)) != 0 &&
        tf_sign(tf_add_rat(diff, radius)) != 0)
      return false;
  }
  return true;
}

Branch Branch::of(std::vector<Int> raw) {
  for (const Int& e : raw)
    if (e < 0) throw UsageError("branch entries must be >= 0");
  while (!raw.empty() && sgn(raw.back()) == 0) raw.pop_back();
  Branch b;
  b.stem = std::move(raw);
  return b;
}

int branch_cmp(const Branch& a, const Branch& b) {
  std::size_t n = std::max(a.stem.size(), b.stem.size());
  for (std::size_t k = 0; k < n; ++k) {
    const Int& x = k < a.stem.size() ? a.stem[k] : Int(0);
    const Int& y = k < b.stem.size() ? b.stem[k] : Int(0);
    if (x != y) return x < y ? -1 : 1;
  }
  return 0;
}

TowerForm eval_coordinate(const Branch& b, const Int& k) {
  if (k < 0) throw UsageError("coordinate must be >= 0");
  // Walk the stem levels, then jump along the zero tail: one zero step adds
  // exactly 2 to the level once it is >= 2, so the constraining depth of the
  // tail solves in closed form.
  Int l = 0;
  std::size_t depth = 0;
  for (; depth < b.stem.size(); ++depth) {
    Int next = child_level(l, b.stem[depth]);
    if (next > k) {
      std::vector<Int> parent(b.stem.begin(), b.stem.begin() + depth);
      return child_coord(parent, l, b.stem[depth], k);
    }
    l = next;
  }
  // Zero tail from depth D = stem size with level l = l_D <= k. The first
  // zero child has level max(l + 2, 4); afterwards levels step by 2, so the
  // constraining depth solves in closed form and the padded parent path —
  // possibly tens of thousands of entries — never needs materializing.
  Int l1 = max_int(l + 2, Int(4));
  Int e;  // zero steps before the constraining one
  if (l1 > k) {
    e = 0;
  } else {
    e = (k - l1) / 2 + 1;
    l = l1 + 2 * (e - 1);
  }
  Int fam = family_assign_ext(b.stem, e);
  return child_coord_assigned(fam, l, Int(0), k);
}

const TowerForm& PointEvaluator::at(const Int& k) {
  auto it = memo_.find(k);
  if (it != memo_.end()) return it->second;
  return memo_.emplace(k, eval_coordinate(branch_, k)).first->second;
}

SeparationCertificate disjointness_certificate(
    const std::vector<Int>& parent_path, const Int& i, const Int& i2) {
  if (i == i2)
    throw UsageError("disjointness_certificate: siblings must be distinct");
  Int lo = min_int(i, i2), hi = max_int(i, i2);
  Int parent_level = level_of_path(parent_path);
  Int fam = family_assign(parent_path);
  Int n = sibling_marker_coord(parent_level, lo);

  SeparationCertificate cert;
  cert.coordinate = n;
  cert.value_lo = child_coord_assigned(fam, parent_level, lo, n);
  cert.value_hi = child_coord_assigned(fam, parent_level, hi, n);
  cert.level_lo = child_level(parent_level, lo);
  cert.level_hi = child_level(parent_level, hi);

  // Both values live in the same interval I_{a*}, so the tower terms cancel
  // and the gap is a plain rational.
  TowerForm diff = tf_sub(cert.value_lo, cert.value_hi);
  if (!diff.terms.empty())
    throw CertificateNotFound("sibling values at coordinate " + int_str(n) +
                              " fell in different intervals");
  cert.gap = rat_abs(diff.residue);

  if (cert.gap < Rat(1, 4))
    throw CertificateNotFound("sibling gap below 1/4 at coordinate " +
                              int_str(n));
  if (cert.level_lo > kResolutionCap || cert.level_hi > kResolutionCap) {
    // Radii 2^-l below machine-shift range are certainly < 1/8 each.
  } else {
    Rat radii = Rat(Int(1), Int(1) << cert.level_lo.get_ui()) +
                Rat(Int(1), Int(1) << cert.level_hi.get_ui());
    radii.canonicalize();
    if (cert.gap <= radii)
      throw CertificateNotFound("gap does not clear ball radii at coordinate " +
                                int_str(n));
  }
  return cert;
}

}  // namespace borelforge
