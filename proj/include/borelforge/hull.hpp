#pragma once
#include <vector>

#include "borelforge/verify.hpp"

namespace borelforge {

// A point of the linear hull: a finite rational combination
// sum lambda_i * x(stem_i) of branch limit points, with every coefficient
// nonzero and the stems strictly increasing in branch order. The empty code
// denotes the zero point.
struct HullCode {
  std::vector<Rat> lambda;
  std::vector<Branch> stems;

  // The same point scaled by a nonzero rational (scaling a code scales the
  // point, so it never changes distinctness).
  HullCode scaled(const Rat& q) const;
};

void validate_hull(const HullCode& code);

// Exact coordinate k of the encoded point.
TowerForm hull_eval(const HullCode& code, const Int& k);

// Outcome of comparing two codes: provably the same point, or a coordinate
// witnessing |difference(k)| >= 1.
struct HullDistinction {
  bool identical = false;
  long m = 0;       // window the difference was decided in
  Int threshold;    // max(l_E, Xi_m) over the difference support
  Int k;            // witness coordinate, meaningful iff !identical
  TowerForm value;  // exact value of the difference at k
};

// Decides whether two codes denote the same point. The coefficient
// difference must fit an m-window with m <= m_max: |support| <= m and every
// coefficient in [-m, m] with magnitude >= 1/m. WindowUnfit carries the
// smallest workable m and a rescale hint; the witness search covers
// threshold < k <= threshold + horizon, and HorizonExhausted past that end
// signals a construction defect rather than equality.
HullDistinction hull_distinguish(const HullCode& a, const HullCode& b,
                                 long m_max, long horizon,
                                 long bit_budget = default_bit_budget());

}  // namespace borelforge
