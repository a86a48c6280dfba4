#include <doctest.h>

#include <random>
#include <set>

#include "borelforge/thick.hpp"

using namespace borelforge;

namespace {

Int pow22(long a) {
  Int p(1);
  p <<= (1UL << static_cast<unsigned long>(a));
  return p;
}

// Independent threshold oracle: evaluate the defining inequality
//   2^(2^x) - x >= m (1 + m + m^2 (2^(2^(x-1)) + x))
// with fully materialized integers and take the first x that satisfies it.
long xi_oracle(long m) {
  for (long x = 1; x <= 8; ++x) {
    Int lhs = pow22(x) - x;
    Int rhs = Int(m) * (1 + m + Int(m) * m * (pow22(x - 1) + x));
    if (lhs >= rhs) return x;
  }
  REQUIRE(false);
  return -1;
}

std::vector<Int> zeros(long e) { return std::vector<Int>(e, Int(0)); }

std::vector<Int> with_zero_tail(std::vector<Int> core, long e) {
  for (long i = 0; i < e; ++i) core.emplace_back(0);
  return core;
}

}  // namespace

TEST_CASE("family elements partition by 2-adic valuation") {
  CHECK(family_element(Int(0), Int(0)) == 1);
  CHECK(family_element(Int(0), Int(3)) == 7);
  CHECK(family_element(Int(1), Int(0)) == 2);
  CHECK(family_element(Int(1), Int(2)) == 10);
  CHECK(family_element(Int(3), Int(1)) == 24);

  // Every positive integer lands in exactly one family.
  for (long v = 1; v <= 512; ++v) {
    long hits = 0;
    for (long j = 0; j <= 9; ++j)
      for (long k = 0; (1L << j) * (2 * k + 1) <= v; ++k)
        if ((1L << j) * (2 * k + 1) == v) ++hits;
    CHECK(hits == 1);
  }
}

TEST_CASE("interval membership") {
  CHECK(thick_member(Int(0), TowerForm(Rat(4))));   // I_1 = [3, 5]
  CHECK_FALSE(thick_member(Int(0), TowerForm(Rat(6))));
  CHECK(thick_member(Int(1), TowerForm(Rat(14))));  // I_2 = [14, 18]
  CHECK_FALSE(thick_member(Int(1), TowerForm(Rat(13))));
  CHECK(thick_member(Int(1), TowerForm(Rat(18))));
  CHECK_FALSE(thick_member(Int(1), TowerForm(Rat(19))));
  CHECK_FALSE(thick_member(Int(0), TowerForm(Rat(-4))));
  // A_0 = {1,3,5,...}: I_1 = [3,5], I_3 = [253,259], then I_5 near 2^32.
  CHECK_FALSE(thick_member(Int(0), TowerForm(Rat(251))));
  CHECK(thick_member(Int(0), TowerForm(Rat(253))));
  CHECK(thick_member(Int(0), TowerForm(Rat(259))));
  CHECK_FALSE(thick_member(Int(0), TowerForm(Rat(260))));
}

TEST_CASE("interval membership boundaries") {
  // Exhaustive scan against a directly materialized union of intervals.
  for (long j = 0; j <= 2; ++j) {
    std::set<long> want;
    for (long a = 1; a <= 4; ++a) {
      if ((a & ((1L << j) - 1)) != 0 || ((a >> j) & 1) != 1) continue;
      long center = 1L << (1L << a);
      for (long v = center - a; v <= center + a; ++v) want.insert(v);
    }
    for (long v = 1; v <= 300; ++v)
      CHECK(thick_member(Int(j), TowerForm(Rat(v))) == (want.count(v) > 0));
  }
}

TEST_CASE("markers and canonical representatives") {
  CHECK(marker_index(Int(0), Int(0)) == 1);
  CHECK(marker(Int(0), Int(0)) == tf_make({{Int(1), Rat(1)}}, Rat(-1)));
  CHECK(tf_expand(marker(Int(0), Int(0))) == Rat(3));
  CHECK(tf_expand(canonical_element(Int(0), Int(0))) == Rat(7, 2));

  CHECK(marker_index(Int(0), Int(5)) == 3);
  CHECK(tf_expand(marker(Int(0), Int(5))) == Rat(253));
  CHECK(tf_expand(canonical_element(Int(0), Int(5))) == Rat(507, 2));

  CHECK(marker_index(Int(1), Int(20)) == 6);
  CHECK(tf_expand(marker(Int(1), Int(20)), 1L << 7) ==
        Rat(Int(1) << 64) - 6);
  CHECK(tf_expand(canonical_element(Int(1), Int(20)), 1L << 7) ==
        Rat(Int(1) << 65, Int(2)) - Rat(11, 2));

  // Large-index families decide instantly: every index >= 63 qualifies.
  CHECK(marker_index(Int(6), Int(1000000)) == 64);
  CHECK(marker_index(Int(63), Int(0)) == (Int(1) << 63));

  // Marker strictly exceeds n; the interval below it stays below.
  for (long j = 0; j <= 3; ++j)
    for (long n = 0; n <= 40; ++n) {
      Int a = marker_index(Int(j), Int(n));
      TowerForm t = marker(Int(j), Int(n));
      CHECK(tf_sign(tf_add_rat(t, Rat(-n))) == 1);
      CHECK(thick_member(Int(j), t));
    }
}

TEST_CASE("trimmed set drops the marker and the small range") {
  Int j(0), n(3);
  TowerForm mk = marker(j, n);  // 253
  CHECK_FALSE(trimmed_member(j, n, mk));
  CHECK(trimmed_member(j, n, canonical_element(j, n)));
  CHECK(trimmed_member(j, n, TowerForm(Rat(4))));       // in I_1, above n
  CHECK_FALSE(trimmed_member(j, Int(4), TowerForm(Rat(4))));  // |q| > n fails
  CHECK_FALSE(trimmed_member(j, n, TowerForm(Rat(6))));  // not thick
  CHECK(trimmed_member(j, n, tf_add_rat(mk, Rat(3))));   // 256 inside I_3
  CHECK_FALSE(trimmed_member(j, n, tf_add_rat(mk, Rat(7))));  // 260 outside
}

TEST_CASE("separation thresholds match the brute-force oracle") {
  const long xi_want[] = {0, 2, 3, 4, 4, 4, 4};
  for (long m = 1; m <= 6; ++m) {
    Thresholds th = xi_thresholds(m);
    CHECK(th.m == m);
    CHECK(th.xi == xi_oracle(m));
    CHECK(th.xi == xi_want[m]);
    CHECK(th.Xi == tf_make({{Int(th.xi), Rat(1)}}, Rat(th.xi)));
  }
  CHECK(tf_expand(xi_thresholds(1).Xi) == Rat(18));
  CHECK(tf_expand(xi_thresholds(2).Xi) == Rat(259));
  CHECK(tf_expand(xi_thresholds(3).Xi) == Rat(65540));
  CHECK_THROWS_AS(xi_thresholds(0), UsageError);
}

TEST_CASE("pairing bijection") {
  CHECK(cantor_pair(Int(0), Int(0)) == 0);
  CHECK(cantor_pair(Int(1), Int(0)) == 1);
  CHECK(cantor_pair(Int(0), Int(1)) == 2);
  for (long z = 0; z <= 5000; ++z) {
    Int x, y;
    cantor_unpair(Int(z), x, y);
    CHECK(cantor_pair(x, y) == z);
  }
}

TEST_CASE("path coding round-trips") {
  CHECK(node_family_index({}) == 0);
  CHECK(node_family_index({Int(0)}) == 1);
  CHECK(node_family_index({Int(0), Int(0)}) == 2);
  CHECK(node_family_index({Int(1)}) == 3);

  std::mt19937_64 eng(11);
  for (int it = 0; it < 500; ++it) {
    std::vector<Int> path;
    long len = static_cast<long>(eng() % 5);
    for (long i = 0; i < len; ++i) path.emplace_back(eng() % 6);
    CHECK(node_family_decode(node_family_index(path)) == path);
  }
  for (long code = 0; code <= 2000; ++code)
    CHECK(node_family_index(node_family_decode(Int(code))) == code);
}

TEST_CASE("family assignment key values") {
  CHECK(family_assign({}) == 0);
  CHECK(family_assign(zeros(1)) == 1);
  CHECK(family_assign(zeros(2)) == 2);
  CHECK(family_assign({Int(1)}) == 16);
  CHECK(family_assign({Int(2)}) == 24);
  CHECK(family_assign({Int(7)}) == 64);
  CHECK(family_assign({Int(1), Int(1)}) == 160);
  CHECK(family_assign(zeros(8)) == 4100);
  CHECK(family_assign(zeros(9)) == 5124);
  CHECK(family_assign(zeros(129)) == 128004);
  CHECK(family_assign(with_zero_tail({Int(1)}, 128)) == 126996);
}

TEST_CASE("family assignment agrees with its core/run form") {
  std::mt19937_64 eng(13);
  for (int it = 0; it < 400; ++it) {
    std::vector<Int> core;
    long len = static_cast<long>(eng() % 4);
    for (long i = 0; i < len; ++i) core.emplace_back(eng() % 8);
    if (!core.empty() && core.back() == 0) core.back() = 1;
    long e = static_cast<long>(eng() % 40);
    CHECK(family_assign(with_zero_tail(core, e)) ==
          family_assign_ext(core, Int(e)));
  }
}

TEST_CASE("family assignment is injective on the reachable paths") {
  std::set<Int> seen;
  long count = 0;
  auto add = [&](const std::vector<Int>& p) {
    seen.insert(family_assign(p));
    ++count;
  };

  // Bushy shallow paths: every path of length <= 4 over entries 0..7.
  std::vector<std::vector<Int>> layer{{}};
  add({});
  for (int d = 1; d <= 4; ++d) {
    std::vector<std::vector<Int>> next;
    for (const auto& p : layer)
      for (long i = 0; i <= 7; ++i) {
        std::vector<Int> q = p;
        q.emplace_back(i);
        add(q);
        next.push_back(std::move(q));
      }
    layer = std::move(next);
  }

  // Long zero runs off short cores (the shapes the limit points visit).
  for (long e = 5; e <= 600; ++e) add(zeros(e));
  for (long c = 1; c <= 7; ++c)
    for (long e = 5; e <= 120; ++e) add(with_zero_tail({Int(c)}, e));
  for (long c1 = 1; c1 <= 7; ++c1)
    for (long c2 = 1; c2 <= 7; ++c2)
      for (long e = 5; e <= 40; ++e)
        add(with_zero_tail({Int(c1), Int(c2)}, e));

  CHECK(count == static_cast<long>(seen.size()));
}

TEST_CASE("distinct families give disjoint thick sets at shared scales") {
  // Values <= 2^16 + 16: intervals from different families never meet
  // because distinct indices a != a' keep |I_a| past I_{a'} entirely.
  for (long v = 1; v <= 300; ++v) {
    int owners = 0;
    for (long j = 0; j <= 4; ++j)
      if (thick_member(Int(j), TowerForm(Rat(v)))) ++owners;
    CHECK(owners <= 1);
  }
}
