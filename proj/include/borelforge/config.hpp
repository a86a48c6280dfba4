#pragma once
#include <string>

#include "borelforge/errors.hpp"

namespace borelforge {

// Run-wide knobs. Every report header echoes all of them, which together
// with the seed makes artifacts byte-reproducible.
struct RunConfig {
  long depth = 3;
  long fanout = 4;
  unsigned long long seed = 0;
  long bitBudget = 1L << 20;
  long trials = 100;
  long mMax = 3;
  long horizon = 500;
  std::string outPath;  // empty = stdout
  std::string format = "json";
};

// Guardrails; throws UsageError.
void validate_config(const RunConfig& c);

// key=value lines (# comments, blank lines ignored); unknown keys rejected.
RunConfig parse_config_file(const std::string& path, RunConfig base);

}  // namespace borelforge
