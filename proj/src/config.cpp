#include "borelforge/config.hpp"

#include <fstream>

namespace borelforge {

void validate_config(const RunConfig& c) {
  if (c.depth < 0 || c.depth > 8)
    throw UsageError("depth must be in [0, 8], got " + std::to_string(c.depth));
  if (c.fanout < 0 || c.fanout > 16)
    throw UsageError("fanout must be in [0, 16], got " +
                     std::to_string(c.fanout));
  if (c.bitBudget < (1L << 10))
    throw UsageError("bitBudget must be >= 1024, got " +
                     std::to_string(c.bitBudget));
  if (c.trials < 0) throw UsageError("trials must be >= 0");
  if (c.mMax < 1 || c.mMax > 6)
    throw UsageError("mMax must be in [1, 6], got " + std::to_string(c.mMax));
  if (c.horizon < 1) throw UsageError("horizon must be >= 1");
  if (c.format != "json")
    throw UsageError("format must be 'json', got '" + c.format + "'");
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto at = [&](const std::string& what) {
      return what + " at " + path + ":" + std::to_string(lineno);
    };
    std::size_t b = line.find_first_not_of(" \t");
    if (b == std::string::npos || line[b] == '#') continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(at("missing '='"));
    auto trim = [](std::string s) {
      std::size_t x = s.find_first_not_of(" \t\r");
      std::size_t y = s.find_last_not_of(" \t\r");
      return x == std::string::npos ? std::string() : s.substr(x, y - x + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    auto as_long = [&]() {
      try {
        return std::stol(val);
      } catch (...) {
        throw UsageError(at("bad integer '" + val + "'"));
      }
    };
    if (key == "depth") base.depth = as_long();
    else if (key == "fanout") base.fanout = as_long();
    else if (key == "seed") base.seed = std::stoull(val);
    else if (key == "bitBudget") base.bitBudget = as_long();
    else if (key == "trials") base.trials = as_long();
    else if (key == "mMax") base.mMax = as_long();
    else if (key == "horizon") base.horizon = as_long();
    else if (key == "outPath") base.outPath = val;
    else if (key == "format") base.format = val;
    else throw UsageError(at("unknown config key '" + key + "'"));
  }
  return base;
}

}  // namespace borelforge
