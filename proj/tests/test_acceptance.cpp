// Acceptance gate: one line per criterion, nonzero exit iff any fails.
// Each criterion enforces its own wall-clock budget.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "borelforge/cli.hpp"
#include "borelforge/json_io.hpp"
#include "borelforge/verify.hpp"

using namespace borelforge;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, double budget_s,
               const std::function<void(std::ostringstream&)>& body) {
  std::ostringstream why;
  bool ok = true;
  auto t0 = std::chrono::steady_clock::now();
  try {
    body(why);
  } catch (const std::exception& e) {
    why << "exception: " << e.what() << "; ";
    ok = false;
  }
  double elapsed = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  if (!why.str().empty()) ok = false;
  if (elapsed > budget_s) {
    why << "over budget (" << budget_s << " s); ";
    ok = false;
  }
  std::ostringstream line;
  line.setf(std::ios::fixed);
  line.precision(2);
  line << (ok ? "[PASS] " : "[FAIL] ") << number << ". " << name << " ("
       << elapsed << " s)";
  if (!ok) line << " — " << why.str();
  std::cout << line.str() << "\n";
  if (!ok) ++g_failures;
}

// ---- independent oracles (no shared code with the library paths) ----------

Int pow22_direct(long a) {
  Int p(1);
  p <<= (1UL << static_cast<unsigned long>(a));
  return p;
}

long xi_brute(long m) {
  for (long x = 1; x <= 12; ++x) {
    Int lhs = pow22_direct(x) - x;
    Int rhs = Int(m) * (1 + m + Int(m) * m * (pow22_direct(x - 1) + x));
    if (lhs >= rhs) return x;
  }
  return -1;
}

Rat expand_direct(const TowerForm& x) {
  Rat acc = x.residue;
  for (const auto& [a, q] : x.terms) {
    if (a > 16) throw std::runtime_error("oracle index out of range");
    acc += q * Rat(pow22_direct(a.get_si()));
  }
  acc.canonicalize();
  return acc;
}

Rat rnd_rat(std::mt19937_64& eng, long num_span, long den_span) {
  long p = static_cast<long>(eng() % (2 * num_span + 1)) - num_span;
  long q = 1 + static_cast<long>(eng() % den_span);
  Rat r(p, q);
  r.canonicalize();
  return r;
}

TowerForm rnd_form(std::mt19937_64& eng, long a_max) {
  std::map<Int, Rat> terms;
  long n_terms = static_cast<long>(eng() % 4);
  for (long t = 0; t < n_terms; ++t)
    terms[Int(1 + static_cast<long>(eng() % a_max))] = rnd_rat(eng, 20, 8);
  return tf_make(std::move(terms), rnd_rat(eng, 1000, 16));
}

Branch branch_of(std::initializer_list<long> raw) {
  std::vector<Int> v;
  for (long e : raw) v.emplace_back(e);
  return Branch::of(std::move(v));
}

std::vector<Branch> branch_pool() {
  return {branch_of({}),     branch_of({1}),    branch_of({2}),
          branch_of({3}),    branch_of({1, 1}), branch_of({2, 1})};
}

std::vector<Rat> coefficient_grid() {
  return {Rat(1), Rat(-1), Rat(3, 2), Rat(-3, 2), Rat(2), Rat(-2)};
}

}  // namespace

int main() {
  criterion(1, "threshold table vs brute-force oracle", 5.0,
            [](std::ostringstream& why) {
              const long xi_want[] = {0, 2, 3, 4};
              const long Xi_want[] = {0, 18, 259, 65540};
              for (long m = 1; m <= 6; ++m) {
                Thresholds th = xi_thresholds(m);
                if (th.xi != xi_brute(m)) why << "xi(" << m << ") mismatch; ";
                if (m <= 3) {
                  if (th.xi != xi_want[m]) why << "xi(" << m << ") off table; ";
                  if (tf_expand(th.Xi) != Rat(Xi_want[m]))
                    why << "Xi(" << m << ") off table; ";
                }
                if (th.Xi != tf_make({{Int(th.xi), Rat(1)}}, Rat(th.xi)))
                  why << "Xi(" << m << ") malformed; ";
              }
            });

  criterion(2, "separation fuzz, 10^4 instances", 60.0,
            [](std::ostringstream& why) {
              long failures = -1;
              lemma1_fuzz(10000, 3, 12, 42, failures);
              if (failures != 0) why << failures << " violations; ";
            });

  criterion(3, "sign/bound differential, 10^4 forms", 30.0,
            [](std::ostringstream& why) {
              std::mt19937_64 eng(2026);
              long bad = 0;
              for (int it = 0; it < 10000; ++it) {
                TowerForm x = rnd_form(eng, 4);
                Rat vx = expand_direct(x);
                if (tf_sign(x) != sgn(vx)) ++bad;
                Rat bound = rat_abs(rnd_rat(eng, 40, 4));
                if (tf_abs_ge(x, bound) != (rat_abs(vx) >= bound)) ++bad;
              }
              if (bad != 0) why << bad << " divergences; ";
            });

  criterion(4, "tree invariants at depth 5, fanout 8", 60.0,
            [](std::ostringstream& why) {
              long complaints = 0;
              TreeCheckStats st =
                  verify_tree(5, 8, 3, 1, [&](const std::string& msg) {
                    if (++complaints <= 3) why << msg << "; ";
                  });
              if (st.failures != 0) why << st.failures << " failures; ";
              if (st.nodes != 37449) why << "walked " << st.nodes << " nodes; ";
              if (st.density_targets <= 0) why << "no density targets; ";
            });

  criterion(
      5, "coordinate bound for all pairs from the branch pool", 120.0,
      [](std::ostringstream& why) {
        std::vector<Branch> pool = branch_pool();
        std::vector<Rat> grid = coefficient_grid();
        std::mt19937_64 eng(5);
        long instances = 0, checks = 0;

        auto run_instance = [&](CombinationSpec spec) {
          Int threshold = combination_threshold(spec, nullptr);
          std::vector<Int> ks;
          for (int t = 0; t < 50; ++t)
            ks.push_back(threshold + 1 + static_cast<long>(eng() % 500));
          Claim2Report rep = claim2_check_at(spec, ks);
          ++instances;
          checks += static_cast<long>(rep.lines.size());
          if (rep.failures != 0)
            why << rep.failures << " failures for an instance; ";
        };

        for (std::size_t i = 0; i < pool.size(); ++i)
          for (const Rat& l : grid) {
            CombinationSpec spec;
            spec.m = 2;
            spec.stems = {pool[i]};
            spec.lambda = {l};
            run_instance(std::move(spec));
          }
        for (std::size_t i = 0; i < pool.size(); ++i)
          for (std::size_t j = i + 1; j < pool.size(); ++j)
            for (const Rat& li : grid)
              for (const Rat& lj : grid) {
                CombinationSpec spec;
                spec.m = 2;
                spec.stems = {pool[i], pool[j]};
                spec.lambda = {li, lj};
                run_instance(std::move(spec));
              }
        if (instances != 6 * 6 + 15 * 36)
          why << "unexpected instance count " << instances << "; ";
        if (checks != instances * 50) why << "missing checks; ";
      });

  criterion(5, "slow tier: one m = 3 instance past 65540", 600.0,
            [](std::ostringstream& why) {
              CombinationSpec spec;
              spec.m = 3;
              spec.stems = {branch_of({})};
              spec.lambda = {Rat(1)};
              Claim2Report rep = claim2_check_range(spec, Int(65541), 50);
              if (rep.threshold != 65540)
                why << "threshold " << int_str(rep.threshold) << "; ";
              if (rep.failures != 0) why << rep.failures << " failures; ";
            });

  criterion(
      6, "hull distinctness for 100 random pairs", 120.0,
      [](std::ostringstream& why) {
        std::vector<Branch> pool = branch_pool();
        std::vector<Rat> grid = coefficient_grid();
        std::mt19937_64 eng(6);

        auto rnd_code = [&] {
          HullCode c;
          std::size_t n = 1 + eng() % 2;
          std::size_t first = eng() % pool.size();
          c.stems.push_back(pool[first]);
          c.lambda.push_back(grid[eng() % grid.size()]);
          if (n == 2) {
            std::size_t second = eng() % pool.size();
            if (second != first) {
              if (branch_cmp(pool[second], pool[first]) < 0)
                c.stems.insert(c.stems.begin(), pool[second]);
              else
                c.stems.push_back(pool[second]);
              c.lambda.push_back(grid[eng() % grid.size()]);
            }
          }
          return c;
        };

        long done = 0, horizon_exhausted = 0;
        while (done < 100) {
          HullCode a = rnd_code();
          HullCode b = rnd_code();
          try {
            HullDistinction d = hull_distinguish(a, b, 4, 500);
            if (d.identical) continue;  // only distinct pairs count
            ++done;
            if (!tf_abs_ge(d.value, Rat(1))) why << "witness below 1; ";
            TowerForm diff =
                tf_sub(hull_eval(a, d.k), hull_eval(b, d.k));
            if (!(diff == d.value)) why << "witness not the difference; ";
            if (!(d.k > d.threshold)) why << "witness at or below threshold; ";
          } catch (const HorizonExhausted&) {
            ++horizon_exhausted;
            ++done;
          }
        }
        if (horizon_exhausted != 0)
          why << horizon_exhausted << " pairs hit the horizon; ";
      });

  criterion(
      7, "byte determinism and round-trip identity", 60.0,
      [](std::ostringstream& why) {
        long f1 = -1, f2 = -1;
        if (lemma1_fuzz(500, 3, 12, 99, f1) != lemma1_fuzz(500, 3, 12, 99, f2))
          why << "fuzz reports differ; ";
        if (f1 != 0 || f2 != 0) why << "fuzz failures; ";

        RunConfig cfg;
        cfg.depth = 3;
        cfg.fanout = 4;
        std::string doc1 = dump_doc(export_tree(cfg, 3, 4));
        std::string doc2 = dump_doc(export_tree(cfg, 3, 4));
        if (doc1 != doc2) why << "exports differ; ";
        Json parsed = Json::parse(doc1);
        if (dump_doc(import_tree(parsed)) != doc1)
          why << "round-trip not the identity; ";

        auto run_cli = [](const std::vector<std::string>& args, int want) {
          std::ostringstream out, err;
          int status = run(args, out, err);
          if (status != want)
            throw std::runtime_error("exit " + std::to_string(status) +
                                     " from a determinism probe");
          return out.str();
        };
        std::vector<std::string> fuzz_args{"verify",  "lemma1", "--trials",
                                           "200",     "--m-max", "3",
                                           "--seed",  "11"};
        if (run_cli(fuzz_args, 0) != run_cli(fuzz_args, 0))
          why << "command reports differ; ";
        std::vector<std::string> tree_args{"tree", "build", "--depth", "2",
                                           "--fanout", "3"};
        if (run_cli(tree_args, 0) != run_cli(tree_args, 0))
          why << "command exports differ; ";
      });

  if (g_failures != 0)
    std::cout << g_failures << " criterion(s) failed" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
