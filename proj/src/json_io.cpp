#include "borelforge/json_io.hpp"

#include <fstream>

namespace borelforge {

namespace {

bool fits_json_int(const Int& a) {
  return a >= 0 && a <= Int("9007199254740991");  // 2^53 - 1
}

std::string hex_window_high(const Int& x) {
  Int ax = abs(x);
  long b = bit_length(ax);
  if (b > 64) ax >>= (b - 64);
  return ax.get_str(16);
}

std::string hex_window_low(const Int& x) {
  Int ax = abs(x);
  Int mask = (Int(1) << 64) - 1;
  Int low = ax & mask;
  return low.get_str(16);
}

Json int_abridged(const Int& x) {
  Json j;
  j["abridged"] = true;
  j["bits"] = bit_length(x);
  j["sign"] = sgn(x);
  j["head_hex"] = hex_window_high(x);
  j["tail_hex"] = hex_window_low(x);
  return j;
}

}  // namespace

Json rat_to_json(const Rat& q) {
  if (bit_length(q.get_num()) > kAbridgeBits ||
      bit_length(q.get_den()) > kAbridgeBits) {
    Json j;
    j["abridged"] = true;
    j["num"] = int_abridged(q.get_num());
    j["den"] = int_abridged(q.get_den());
    return j;
  }
  return rat_str(q);
}

Rat rat_from_json(const Json& j) {
  if (j.is_string()) return rat_parse(j.get<std::string>());
  throw IoError("rational expected as string, got: " + j.dump());
}

namespace {

Json index_to_json(const Int& a) {
  if (fits_json_int(a)) return Json(a.get_si());
  Json j;
  unsigned long k = val2(a);
  j["pow2"] = static_cast<long>(k);
  j["odd"] = int_str(Int(a >> k));
  return j;
}

Int index_from_json(const Json& j) {
  if (j.is_number_integer()) return Int(j.get<long>());
  if (j.is_object() && j.contains("pow2") && j.contains("odd")) {
    long k = j.at("pow2").get<long>();
    Int odd = int_parse(j.at("odd").get<std::string>());
    if (k < 0 || k > (1L << 33)) throw IoError("tower index shift out of range");
    Int a = odd;
    mpz_mul_2exp(a.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(k));
    return a;
  }
  throw IoError("bad tower index encoding: " + j.dump());
}

bool small_expansion(const TowerForm& x) {
  return x.terms.empty() || x.terms.rbegin()->first <= 5;
}

}  // namespace

Json tf_to_json(const TowerForm& x) {
  Json j;
  j["terms"] = Json::array();
  for (const auto& [a, q] : x.terms) {
    Json t;
    t["a"] = index_to_json(a);
    t["q"] = rat_to_json(q);
    j["terms"].push_back(t);
  }
  j["r"] = rat_to_json(x.residue);
  return j;
}

Json value_to_json(const TowerForm& x) {
  if (small_expansion(x)) return Json(rat_str(tf_expand(x)));
  return tf_to_json(x);
}

TowerForm value_from_json(const Json& j) {
  if (j.is_string()) return TowerForm(rat_parse(j.get<std::string>()));
  if (j.is_object() && j.contains("terms") && j.contains("r")) {
    if (j.contains("abridged"))
      throw IoError("abridged values are report-only and cannot be parsed");
    std::map<Int, Rat> terms;
    for (const Json& t : j.at("terms")) {
      Int a = index_from_json(t.at("a"));
      Rat q = rat_from_json(t.at("q"));
      if (terms.count(a)) throw IoError("duplicate tower index in value");
      terms.emplace(a, q);
    }
    return tf_make(std::move(terms), rat_from_json(j.at("r")));
  }
  throw IoError("bad value encoding: " + j.dump());
}

Json config_to_json(const RunConfig& c) {
  Json j;
  j["depth"] = c.depth;
  j["fanout"] = c.fanout;
  j["seed"] = c.seed;
  j["bitBudget"] = c.bitBudget;
  j["trials"] = c.trials;
  j["mMax"] = c.mMax;
  j["horizon"] = c.horizon;
  // outPath is deliberately not echoed: report bytes must not depend on
  // where they are written.
  j["format"] = c.format;
  return j;
}

Json hull_code_to_json(const HullCode& c) {
  Json j;
  j["lambda"] = Json::array();
  for (const Rat& l : c.lambda) j["lambda"].push_back(rat_str(l));
  j["stems"] = Json::array();
  for (const Branch& b : c.stems) {
    Json s = Json::array();
    for (const Int& e : b.stem) {
      if (!fits_json_int(e))
        throw ResourceLimit("stem entry too large to serialize");
      s.push_back(e.get_si());
    }
    j["stems"].push_back(s);
  }
  return j;
}

HullCode hull_code_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("lambda") || !j.contains("stems") ||
      !j.at("lambda").is_array() || !j.at("stems").is_array())
    throw IoError("hull code needs \"lambda\" and \"stems\" arrays");
  HullCode c;
  for (const Json& l : j.at("lambda")) c.lambda.push_back(rat_from_json(l));
  for (const Json& s : j.at("stems")) {
    if (!s.is_array()) throw IoError("each stem must be an array");
    std::vector<Int> raw;
    for (const Json& e : s) {
      if (!e.is_number_integer() || e.get<long>() < 0)
        throw IoError("stem entries must be nonnegative integers");
      raw.push_back(Int(e.get<long>()));
    }
    c.stems.push_back(Branch::of(std::move(raw)));
  }
  validate_hull(c);
  return c;
}

Json node_to_json(const TreeNode& n) {
  Json j;
  j["path"] = Json::array();
  for (const Int& e : n.path) {
    if (!fits_json_int(e))
      throw ResourceLimit("path entry too large to serialize");
    j["path"].push_back(e.get_si());
  }
  if (!fits_json_int(n.level))
    throw ResourceLimit("level too large to serialize");
  j["l"] = n.level.get_si();
  if (!n.path.empty()) j["M"] = n.marker_coord.get_si();
  Json w = Json::object();
  for (const auto& [coord, value] : n.window)
    w[int_str(coord)] = value_to_json(value);
  j["window"] = w;
  return j;
}

Json export_tree(const RunConfig& c, long depth, long fanout) {
  if (depth < 0 || fanout < 0) throw UsageError("depth/fanout must be >= 0");
  // Total node count SUM fanout^d, d <= depth; refuse beyond desk scale.
  double est = 1;
  double total = 1;
  for (long d = 1; d <= depth; ++d) {
    est *= fanout;
    total += est;
    if (total > 200000)
      throw ResourceLimit("tree of depth " + std::to_string(depth) +
                          ", fanout " + std::to_string(fanout) +
                          " exceeds the node budget");
  }

  Json doc;
  doc["version"] = "1";
  doc["config"] = config_to_json(c);
  doc["depth"] = depth;
  doc["fanout"] = fanout;
  doc["nodes"] = Json::array();

  // Breadth-first gives (path length, lex) order directly when children are
  // visited in index order.
  std::vector<TreeNode> frontier{make_root()};
  doc["nodes"].push_back(node_to_json(frontier[0]));
  for (long d = 1; d <= depth; ++d) {
    std::vector<TreeNode> next;
    for (const TreeNode& parent : frontier) {
      for (long i = 0; i < fanout; ++i) {
        TreeNode ch = make_child(parent, Int(i));
        doc["nodes"].push_back(node_to_json(ch));
        next.push_back(std::move(ch));
      }
    }
    frontier = std::move(next);
  }
  return doc;
}

namespace {

TreeNode node_from_json(const Json& j) {
  TreeNode n;
  if (!j.contains("path") || !j.contains("l") || !j.contains("window"))
    throw IoError("node record missing path/l/window");
  for (const Json& e : j.at("path")) n.path.push_back(Int(e.get<long>()));
  n.level = Int(j.at("l").get<long>());
  if (!n.path.empty()) {
    if (!j.contains("M")) throw IoError("non-root node record missing M");
    n.marker_coord = Int(j.at("M").get<long>());
  } else {
    n.marker_coord = -1;
  }
  for (auto it = j.at("window").begin(); it != j.at("window").end(); ++it) {
    Int coord = int_parse(it.key());
    n.window.emplace(coord, value_from_json(it.value()));
  }
  if (!n.path.empty()) {
    std::vector<Int> parent(n.path.begin(), n.path.end() - 1);
    n.parent_level = level_of_path(parent);
    n.parent_family = family_assign(parent);
  } else {
    n.parent_level = 0;
    n.parent_family = -1;
  }
  return n;
}

RunConfig config_from_json(const Json& j) {
  RunConfig c;
  c.depth = j.at("depth").get<long>();
  c.fanout = j.at("fanout").get<long>();
  c.seed = j.at("seed").get<unsigned long long>();
  c.bitBudget = j.at("bitBudget").get<long>();
  c.trials = j.at("trials").get<long>();
  c.mMax = j.at("mMax").get<long>();
  c.horizon = j.at("horizon").get<long>();
  c.format = j.at("format").get<std::string>();
  return c;
}

}  // namespace

Json import_tree(const Json& doc) {
  if (!doc.is_object() || !doc.contains("version") || !doc.contains("nodes"))
    throw IoError("not a tree document");
  if (doc.at("version").get<std::string>() != "1")
    throw IoError("unsupported tree document version");
  RunConfig c = config_from_json(doc.at("config"));
  long depth = doc.at("depth").get<long>();
  long fanout = doc.at("fanout").get<long>();

  std::vector<TreeNode> nodes;
  for (const Json& nj : doc.at("nodes")) nodes.push_back(node_from_json(nj));

  // Structural validation: (path length, lex) order, strictly increasing.
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    const auto& a = nodes[k - 1].path;
    const auto& b = nodes[k].path;
    bool ordered = a.size() < b.size() || (a.size() == b.size() && a < b);
    if (!ordered) throw IoError("node records out of order");
  }

  Json out;
  out["version"] = "1";
  out["config"] = config_to_json(c);
  out["depth"] = depth;
  out["fanout"] = fanout;
  out["nodes"] = Json::array();
  for (const TreeNode& n : nodes) out["nodes"].push_back(node_to_json(n));
  return out;
}

std::string dump_doc(const Json& doc) { return doc.dump(2) + "\n"; }

std::string dump_line(const Json& line) { return line.dump(); }

}  // namespace borelforge
