#include "borelforge/verify.hpp"

#include <random>
#include <sstream>

#include "borelforge/json_io.hpp"

namespace borelforge {

namespace {

Rat window_low(long m) { return Rat(1, m); }

void check_lambda_window(const Rat& lambda, long m, const std::string& where) {
  Rat a = rat_abs(lambda);
  if (a > Rat(m))
    throw InvalidInstance(where + ": |lambda| = " + rat_str(a) + " exceeds m = " +
                          std::to_string(m));
  if (a < window_low(m))
    throw InvalidInstance(where + ": |lambda| = " + rat_str(a) +
                          " below 1/m = " + rat_str(window_low(m)));
}

}  // namespace

Lemma1Verdict lemma1_check(const Lemma1Instance& inst, long bit_budget) {
  if (inst.m < 1) throw InvalidInstance("m must be >= 1");
  long n = static_cast<long>(inst.entries.size());
  if (n < 1 || n > inst.m)
    throw InvalidInstance("instance must have between 1 and m points, got " +
                          std::to_string(n));
  for (std::size_t a = 0; a < inst.entries.size(); ++a)
    for (std::size_t b = a + 1; b < inst.entries.size(); ++b)
      if (inst.entries[a].path == inst.entries[b].path)
        throw InvalidInstance("paths must be pairwise distinct");

  for (const auto& e : inst.entries) {
    check_lambda_window(e.lambda, inst.m, "lambda");
    Int j = node_family_index(e.path);
    if (!thick_member(j, e.point, bit_budget))
      throw InvalidInstance("point for family " + int_str(j) +
                            " is not a thick-set member");
  }

  Thresholds th = xi_thresholds(inst.m);
  bool beyond = false;
  for (const auto& e : inst.entries) {
    TowerForm gap = tf_sub(e.point, th.Xi);
    TowerForm gap_neg = tf_add(e.point, th.Xi);
    if (tf_sign(gap, bit_budget) > 0 || tf_sign(gap_neg, bit_budget) < 0) {
      beyond = true;
      break;
    }
  }
  if (!beyond)
    throw InvalidInstance("all points lie inside [-Xi_m, Xi_m], Xi_" +
                          std::to_string(inst.m) + " = " +
                          value_to_json(th.Xi).dump());

  Lemma1Verdict v;
  for (const auto& e : inst.entries)
    v.sum = tf_add(v.sum, tf_scale(e.lambda, e.point));
  v.ok = tf_abs_ge(v.sum, Rat(inst.m + 1), bit_budget);
  return v;
}

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// mt19937_64 raw draws only: the standard pins its output sequence, while
// std::uniform_int_distribution does not, and reports must be byte-stable.
struct TrialRng {
  std::mt19937_64 eng;
  explicit TrialRng(uint64_t s) : eng(s) {}
  uint64_t below(uint64_t n) { return eng() % n; }
};

// The four shallow paths used by the fuzzer; their Cantor codes are 0..3.
const std::vector<std::vector<Int>>& fuzz_paths() {
  static const std::vector<std::vector<Int>> p = {
      {}, {Int(0)}, {Int(0), Int(0)}, {Int(1)}};
  return p;
}

std::vector<long> family_elements_upto(long j, long a_max) {
  std::vector<long> out;
  for (long k = 0;; ++k) {
    long a = (2 * k + 1) << j;
    if (a > a_max) break;
    out.push_back(a);
  }
  return out;
}

TowerForm sample_point(TrialRng& rng, long a) {
  uint64_t mode = rng.below(10);
  if (mode < 4) return tf_make({{Int(a), Rat(1)}}, -Rat(a));       // left end
  if (mode < 8) return tf_make({{Int(a), Rat(1)}}, Rat(a));        // right end
  if (mode == 8) return tf_make({{Int(a), Rat(1)}}, Rat(1 - 2 * a, 2));
  long g = static_cast<long>(rng.below(16 * a + 1)) - 8 * a;       // dyadic
  return tf_make({{Int(a), Rat(1)}}, Rat(g, 8));
}

Rat sample_lambda(TrialRng& rng, long m) {
  long u = static_cast<long>(rng.below(1025));
  Rat frac(u, 1024);
  frac.canonicalize();
  Rat mag = Rat(1, m) + frac * (Rat(m) - Rat(1, m));
  return rng.below(2) ? mag : Rat(-mag);
}

Json path_to_json(const std::vector<Int>& path) {
  Json a = Json::array();
  for (const Int& e : path) a.push_back(e.get_si());
  return a;
}

}  // namespace

std::string lemma1_fuzz(long trials, long m_max, long a_max,
                        unsigned long long seed, long& failures,
                        long bit_budget) {
  if (m_max < 1 || m_max > 6) throw UsageError("lemma1_fuzz: mMax must be in [1, 6]");
  if (a_max < 5 || a_max > 20) throw UsageError("lemma1_fuzz: aMax must be in [5, 20]");
  if (trials < 0) throw UsageError("lemma1_fuzz: trials must be >= 0");

  failures = 0;
  std::ostringstream out;
  Json header;
  header["kind"] = "lemma1_fuzz";
  header["version"] = "1";
  header["trials"] = trials;
  header["mMax"] = m_max;
  header["aMax"] = a_max;
  header["seed"] = seed;
  out << dump_line(header) << "\n";

  for (long t = 0; t < trials; ++t) {
    TrialRng rng(splitmix64(seed ^ splitmix64(static_cast<uint64_t>(t))));
    long m = 1 + static_cast<long>(rng.below(static_cast<uint64_t>(m_max)));
    Thresholds th = xi_thresholds(m);

    // Families usable at all, and families able to host the forced point.
    std::vector<long> pool, force_pool;
    for (long j = 0; j <= 3; ++j) {
      auto all = family_elements_upto(j, a_max);
      if (all.empty()) continue;
      pool.push_back(j);
      for (long a : all)
        if (a > th.xi) {
          force_pool.push_back(j);
          break;
        }
    }

    long n_cap = std::min<long>({m, static_cast<long>(pool.size()), 4});
    long n = 1 + static_cast<long>(rng.below(static_cast<uint64_t>(n_cap)));

    // Choose n distinct families, then make sure one can exceed Xi_m.
    std::vector<long> chosen = pool;
    for (std::size_t k = chosen.size(); k > 1; --k)
      std::swap(chosen[k - 1], chosen[rng.below(k)]);
    chosen.resize(static_cast<std::size_t>(n));
    bool can_force = false;
    for (long j : chosen)
      for (long f : force_pool)
        if (j == f) can_force = true;
    if (!can_force) chosen[0] = force_pool[rng.below(force_pool.size())];

    long force_at = static_cast<long>(rng.below(static_cast<uint64_t>(n)));
    {
      // Position force_at must sit on a force-capable family.
      bool ok = false;
      for (long f : force_pool) ok = ok || chosen[force_at] == f;
      if (!ok)
        for (long idx = 0; idx < n; ++idx)
          for (long f : force_pool)
            if (chosen[idx] == f) force_at = idx;
    }

    Lemma1Instance inst;
    inst.m = m;
    for (long idx = 0; idx < n; ++idx) {
      long j = chosen[idx];
      auto all = family_elements_upto(j, a_max);
      std::vector<long> beyond;
      for (long a : all)
        if (a > th.xi) beyond.push_back(a);
      const auto& src = idx == force_at ? beyond : all;
      long a = src[rng.below(src.size())];
      Lemma1Entry e;
      e.path = fuzz_paths()[static_cast<std::size_t>(j)];
      e.lambda = sample_lambda(rng, m);
      e.point = sample_point(rng, a);
      inst.entries.push_back(std::move(e));
    }

    Lemma1Verdict v = lemma1_check(inst, bit_budget);
    if (!v.ok) ++failures;

    Json line;
    line["trial"] = t;
    line["m"] = m;
    Json entries = Json::array();
    for (const auto& e : inst.entries) {
      Json je;
      je["path"] = path_to_json(e.path);
      je["lambda"] = rat_str(e.lambda);
      je["point"] = value_to_json(e.point);
      entries.push_back(je);
    }
    line["entries"] = entries;
    line["sum"] = value_to_json(v.sum);
    line["ok"] = v.ok;
    out << dump_line(line) << "\n";
  }

  Json footer;
  footer["trials"] = trials;
  footer["failures"] = failures;
  out << dump_line(footer) << "\n";
  return out.str();
}

PrefixStats r_and_l(const std::vector<Branch>& E) {
  if (E.empty()) throw InvalidInstance("branch set must be nonempty");
  for (std::size_t a = 0; a < E.size(); ++a)
    for (std::size_t b = a + 1; b < E.size(); ++b)
      if (branch_cmp(E[a], E[b]) == 0)
        throw InvalidInstance("branches must be pairwise distinct");

  // Smallest r with injective depth-r restriction = 1 + longest pairwise
  // common prefix of the zero extensions.
  std::size_t r = 0;
  if (E.size() > 1) {
    for (std::size_t a = 0; a < E.size(); ++a)
      for (std::size_t b = a + 1; b < E.size(); ++b) {
        std::size_t len = std::max(E[a].stem.size(), E[b].stem.size());
        std::size_t lcp = 0;
        for (std::size_t k = 0; k < len; ++k) {
          Int x = k < E[a].stem.size() ? E[a].stem[k] : Int(0);
          Int y = k < E[b].stem.size() ? E[b].stem[k] : Int(0);
          if (x != y) break;
          ++lcp;
        }
        r = std::max(r, lcp + 1);
      }
  }

  PrefixStats st;
  st.r = static_cast<long>(r);
  st.l = 0;
  for (const Branch& br : E) {
    Int l = 0;
    for (std::size_t d = 0; d < r; ++d) {
      Int entry = d < br.stem.size() ? br.stem[d] : Int(0);
      l = child_level(l, entry);
    }
    st.l = max_int(st.l, l);
  }
  return st;
}

void validate_combination(const CombinationSpec& spec) {
  if (spec.m < 1) throw InvalidInstance("m must be >= 1");
  if (spec.stems.empty())
    throw InvalidInstance("combination must have at least one branch");
  if (static_cast<long>(spec.stems.size()) > spec.m)
    throw InvalidInstance("combination has " +
                          std::to_string(spec.stems.size()) +
                          " branches, more than m = " + std::to_string(spec.m));
  if (spec.lambda.size() != spec.stems.size())
    throw InvalidInstance("coefficient count does not match branch count");
  for (std::size_t a = 0; a < spec.stems.size(); ++a)
    for (std::size_t b = a + 1; b < spec.stems.size(); ++b)
      if (branch_cmp(spec.stems[a], spec.stems[b]) == 0)
        throw InvalidInstance("branches must be pairwise distinct");
  for (const Rat& l : spec.lambda) check_lambda_window(l, spec.m, "lambda");
}

Int combination_threshold(const CombinationSpec& spec, PrefixStats* stats_out) {
  PrefixStats st = r_and_l(spec.stems);
  if (stats_out != nullptr) *stats_out = st;
  Thresholds th = xi_thresholds(spec.m);
  Rat xi_val = tf_expand(th.Xi, 1L << 20);
  return max_int(st.l, Int(xi_val.get_num()));
}

Claim2Report claim2_check_at(const CombinationSpec& spec,
                             const std::vector<Int>& ks, long bit_budget) {
  validate_combination(spec);
  Claim2Report rep;
  rep.threshold = combination_threshold(spec, &rep.prefix);
  for (const Int& k : ks)
    if (k <= rep.threshold)
      throw RangeTooLow(int_str(rep.threshold),
                        "k = " + int_str(k) + " must exceed max(l_E, Xi_m) = " +
                            int_str(rep.threshold));

  std::vector<PointEvaluator> evals;
  evals.reserve(spec.stems.size());
  for (const Branch& b : spec.stems) evals.emplace_back(b);

  for (const Int& k : ks) {
    TowerForm sum;
    for (std::size_t i = 0; i < evals.size(); ++i)
      sum = tf_add(sum, tf_scale(spec.lambda[i], evals[i].at(k)));
    Claim2Line line{k, sum, tf_abs_ge(sum, Rat(1), bit_budget)};
    if (!line.ok) ++rep.failures;
    rep.lines.push_back(std::move(line));
  }
  return rep;
}

Claim2Report claim2_check_range(const CombinationSpec& spec, const Int& k_from,
                                long k_count, long bit_budget) {
  if (k_count < 0) throw UsageError("k count must be >= 0");
  if (k_count > 100000) throw ResourceLimit("k count beyond desk scale");
  std::vector<Int> ks;
  ks.reserve(static_cast<std::size_t>(k_count));
  for (long d = 0; d < k_count; ++d) ks.push_back(k_from + d);
  return claim2_check_at(spec, ks, bit_budget);
}

namespace {

void density_surrogate(const TreeNode& parent, long density_r,
                       TreeCheckStats& stats,
                       const std::function<void(const std::string&)>& on_fail) {
  Int j = family_assign(parent.path);
  const Int& l = parent.level;
  for (long r = 1; r <= density_r; ++r) {
    unsigned long re = static_cast<unsigned long>(r);
    Int two_r = Int(1) << re;
    // Targets on the window [l, l+2): offsets in (0, 2] at resolution 2^-r,
    // all at distance >= 1/4 from the markers (the avoid-admissible range).
    Int g_lo = -(two_r / 4);
    Int g_cap = 3 * (two_r / 2);
    // Coordinate l sees the plain enumeration; its first admissible g is
    // -2^(r-1)+1, which covers [g_lo, g_cap] entirely.
    Int plain_cut = -(two_r / 2) + 1;
    Int avoid_cut = g_lo;
    Int a0 = marker_index(j, l);
    Int count0 = 2 * a0 * two_r - two_r / 2 - plain_cut + 1;

    for (Int g0 = g_lo; g0 <= g_cap; ++g0) {
      for (Int g1 = g_lo; g1 <= g_cap; ++g1) {
        ++stats.density_targets;
        // Selector digits for the two window coordinates: coordinate l is
        // never an earlier sibling's marker, coordinate l+1 always is once
        // i >= 1, which pair(pair(1, r-1), v) guarantees.
        Int d0 = g0 - plain_cut;
        Int d1 = g1 - avoid_cut;
        Int v = d0 + count0 * d1;
        Int i = cantor_pair(cantor_pair(Int(1), Int(r - 1)), v);
        TreeNode child = make_child(parent, i);
        TowerForm want0 =
            tf_add_rat(marker(j, l), Rat(1, 2) + Rat(g0) / Rat(two_r));
        TowerForm want1 =
            tf_add_rat(marker(j, l + 1), Rat(1, 2) + Rat(g1) / Rat(two_r));
        if (!(child.window.at(l) == want0) ||
            !(child.window.at(l + 1) == want1)) {
          ++stats.failures;
          on_fail("density target missed at node path of length " +
                  std::to_string(parent.path.size()) + ", r = " +
                  std::to_string(r));
        }
      }
    }
  }
}

}  // namespace

TreeCheckStats verify_tree(long depth, long fanout, long density_r,
                           long density_depth,
                           const std::function<void(const std::string&)>& on_fail) {
  if (depth < 0 || fanout < 1) throw UsageError("depth >= 0, fanout >= 1");
  double total = 1, level_count = 1;
  for (long d = 1; d <= depth; ++d) {
    level_count *= fanout;
    total += level_count;
    if (total > 200000)
      throw ResourceLimit("tree walk beyond the node budget");
  }

  TreeCheckStats stats;
  std::vector<TreeNode> frontier{make_root()};
  stats.nodes = 1;
  if (density_depth >= 0 && density_r >= 1)
    density_surrogate(frontier[0], density_r, stats, on_fail);

  for (long d = 1; d <= depth; ++d) {
    std::vector<TreeNode> next;
    for (const TreeNode& parent : frontier) {
      Int fam = family_assign(parent.path);
      for (long i = 0; i < fanout; ++i) {
        TreeNode ch = make_child(parent, Int(i));
        ++stats.nodes;

        // (2_s): level growth.
        if (!(ch.level > parent.level + i)) {
          ++stats.failures;
          on_fail("level growth violated at child " + std::to_string(i));
        }

        // (3_s): containment of every materialized coordinate.
        for (const auto& [n, v] : ch.window) {
          ++stats.containment_checks;
          if (!trimmed_member(fam, n, v)) {
            ++stats.failures;
            on_fail("window value escapes trimmed set at coordinate " +
                    int_str(n));
          }
        }
        ++stats.containment_checks;
        if (!(path_point_coord(ch.path, ch.marker_coord) ==
              marker(fam, ch.marker_coord))) {
          ++stats.failures;
          on_fail("marker coordinate mismatch");
        }
        ++stats.containment_checks;
        if (!trimmed_member(fam, ch.marker_coord + 1,
                            path_point_coord(ch.path, ch.marker_coord + 1))) {
          ++stats.failures;
          on_fail("canonical tail value escapes trimmed set");
        }

        if (d <= density_depth && density_r >= 1)
          density_surrogate(ch, density_r, stats, on_fail);
        next.push_back(std::move(ch));
      }

      // (1_s): pairwise ball disjointness via exact certificates.
      for (long i = 0; i < fanout; ++i)
        for (long i2 = i + 1; i2 < fanout; ++i2) {
          ++stats.sibling_pairs;
          try {
            SeparationCertificate cert =
                disjointness_certificate(parent.path, Int(i), Int(i2));
            if (cert.gap < Rat(1, 4)) {
              ++stats.failures;
              on_fail("certificate gap below 1/4");
            }
          } catch (const CertificateNotFound& e) {
            ++stats.failures;
            on_fail(std::string("certificate missing: ") + e.what());
          }
        }
    }
    frontier = std::move(next);
  }
  return stats;
}

}  // namespace borelforge
