#include "borelforge/hull.hpp"

#include <limits>
#include <map>

namespace borelforge {

HullCode HullCode::scaled(const Rat& q) const {
  if (q == 0) throw UsageError("scale factor must be nonzero");
  HullCode out = *this;
  for (Rat& l : out.lambda) l *= q;
  return out;
}

void validate_hull(const HullCode& code) {
  if (code.lambda.size() != code.stems.size())
    throw InvalidInstance("coefficient count does not match branch count");
  for (const Rat& l : code.lambda)
    if (l == 0) throw InvalidInstance("coefficients must be nonzero");
  for (std::size_t i = 0; i + 1 < code.stems.size(); ++i)
    if (branch_cmp(code.stems[i], code.stems[i + 1]) >= 0)
      throw InvalidInstance("branches must be strictly increasing");
}

TowerForm hull_eval(const HullCode& code, const Int& k) {
  validate_hull(code);
  TowerForm sum;
  for (std::size_t i = 0; i < code.stems.size(); ++i)
    sum = tf_add(sum, tf_scale(code.lambda[i], eval_coordinate(code.stems[i], k)));
  return sum;
}

namespace {

struct BranchLess {
  bool operator()(const Branch& a, const Branch& b) const {
    return branch_cmp(a, b) < 0;
  }
};

long clamp_long(const Int& v) {
  return v.fits_slong_p() ? v.get_si() : std::numeric_limits<long>::max();
}

}  // namespace

HullDistinction hull_distinguish(const HullCode& a, const HullCode& b,
                                 long m_max, long horizon, long bit_budget) {
  validate_hull(a);
  validate_hull(b);
  if (m_max < 1 || m_max > 6) throw UsageError("mMax must be in [1, 6]");
  if (horizon < 1) throw UsageError("horizon must be >= 1");

  // Coefficient difference; shared branches with equal coefficients cancel.
  std::map<Branch, Rat, BranchLess> diff;
  for (std::size_t i = 0; i < a.stems.size(); ++i)
    diff[a.stems[i]] += a.lambda[i];
  for (std::size_t i = 0; i < b.stems.size(); ++i)
    diff[b.stems[i]] -= b.lambda[i];
  for (auto it = diff.begin(); it != diff.end();)
    it = it->second == 0 ? diff.erase(it) : std::next(it);

  HullDistinction out;
  if (diff.empty()) {
    out.identical = true;
    return out;
  }

  Rat lo = rat_abs(diff.begin()->second), hi = lo;
  for (const auto& [stem, coeff] : diff) {
    Rat mag = rat_abs(coeff);
    if (mag < lo) lo = mag;
    if (mag > hi) hi = mag;
  }
  Int needed = max_int(Int(diff.size()),
                       max_int(ceil_rat(hi), ceil_rat(Rat(1) / lo)));
  if (needed > m_max) {
    // Smallest integer rescale lifting every coefficient to >= 1/m_max; it
    // helps only when it also keeps the top magnitude inside the window.
    Int c = ceil_rat(Rat(1, m_max) / lo);
    std::string hint = ceil_rat(Rat(c) * hi) <= m_max &&
                               Int(diff.size()) <= m_max
                           ? "scale both codes by " + int_str(c)
                           : "raise the window cap";
    throw WindowUnfit(clamp_long(needed), hint,
                      "coefficient difference needs window m = " +
                          int_str(needed) + ", cap is " +
                          std::to_string(m_max));
  }

  CombinationSpec spec;
  spec.m = needed.get_si();
  for (const auto& [stem, coeff] : diff) {
    spec.stems.push_back(stem);
    spec.lambda.push_back(coeff);
  }
  validate_combination(spec);
  out.m = spec.m;
  out.threshold = combination_threshold(spec, nullptr);

  std::vector<PointEvaluator> evals;
  evals.reserve(spec.stems.size());
  for (const Branch& s : spec.stems) evals.emplace_back(s);
  for (long d = 1; d <= horizon; ++d) {
    Int k = out.threshold + d;
    TowerForm sum;
    for (std::size_t i = 0; i < evals.size(); ++i)
      sum = tf_add(sum, tf_scale(spec.lambda[i], evals[i].at(k)));
    if (tf_abs_ge(sum, Rat(1), bit_budget)) {
      out.k = k;
      out.value = sum;
      return out;
    }
  }
  throw HorizonExhausted("no witness coordinate in (" + int_str(out.threshold) +
                         ", " + int_str(out.threshold + horizon) + "]");
}

}  // namespace borelforge
