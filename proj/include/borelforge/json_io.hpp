#pragma once
#include <json.hpp>

#include "borelforge/config.hpp"
#include "borelforge/hull.hpp"
#include "borelforge/tree.hpp"

namespace borelforge {

// Insertion-ordered JSON keeps serialization byte-deterministic.
using Json = nlohmann::ordered_json;

// Exact value encoding:
//   - plain rational        -> "p/q" (also used for forms whose expansion is
//                              small: all indices a <= 5),
//   - genuine tower form    -> {"terms":[{"a":A,"q":"p/q"},...],"r":"p/q"},
//     where A is a JSON integer when it fits and {"pow2":k,"odd":"d"}
//     (A = d * 2^k) beyond that,
//   - oversized rationals inside a form (beyond kAbridgeBits) serialize as
//     {"abridged":true,"bits":B,"sign":s,"head_hex":...,"tail_hex":...};
//     abridged payloads are report-only and refuse to parse back.
inline constexpr long kAbridgeBits = 1L << 18;

Json value_to_json(const TowerForm& x);
TowerForm value_from_json(const Json& j);

// Always the object form (the threshold Xi is pinned to it).
Json tf_to_json(const TowerForm& x);

Json rat_to_json(const Rat& q);
Rat rat_from_json(const Json& j);

Json config_to_json(const RunConfig& c);

// Hull codes: {"lambda":["p/q",...],"stems":[[...],...]}.
Json hull_code_to_json(const HullCode& c);
HullCode hull_code_from_json(const Json& j);

// Tree node record: {"path":[...],"l":L,"M":M,"window":{"n":value,...}};
// the root omits "M" and has an empty window.
Json node_to_json(const TreeNode& n);

// Whole-tree document: {"version":"1","config":{...},"depth":D,"fanout":F,
// "nodes":[...]} with nodes sorted by (path length, lexicographic path).
Json export_tree(const RunConfig& c, long depth, long fanout);

// Parses and structurally validates a previously exported document
// (schema, node ordering, value encodings); returns the document re-built
// from parsed state so that re-serialization is byte-identical.
Json import_tree(const Json& doc);

std::string dump_doc(const Json& doc);    // pretty, trailing newline
std::string dump_line(const Json& line);  // compact, no newline

}  // namespace borelforge
