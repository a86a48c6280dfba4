#include "borelforge/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>

#include "borelforge/config.hpp"
#include "borelforge/hull.hpp"
#include "borelforge/json_io.hpp"

namespace borelforge {

namespace {

Json int_to_json(const Int& v) {
  static const Int kJsonMax("9007199254740991");  // 2^53 - 1
  if (v >= -kJsonMax && v <= kJsonMax)
    return Json(static_cast<long long>(v.get_si()));
  return Json(int_str(v));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<Int> parse_path(const std::string& s) {
  std::vector<Int> out;
  if (s.empty()) return out;
  for (const std::string& tok : split(s, ',')) {
    if (tok.empty()) throw UsageError("empty entry in path \"" + s + "\"");
    Int e = int_parse(tok);
    if (e < 0) throw UsageError("path entries must be >= 0");
    out.push_back(e);
  }
  return out;
}

std::vector<Branch> parse_stems(const std::string& s) {
  std::vector<Branch> out;
  for (const std::string& seg : split(s, '|'))
    out.push_back(Branch::of(parse_path(seg)));
  return out;
}

std::vector<Rat> parse_lambdas(const std::string& s) {
  std::vector<Rat> out;
  for (const std::string& tok : split(s, ',')) {
    if (tok.empty()) throw UsageError("empty coefficient in \"" + s + "\"");
    out.push_back(rat_parse(tok));
  }
  return out;
}

// "A..B" inclusive, or a single coordinate.
std::vector<Int> parse_coords(const std::string& s) {
  std::vector<Int> out;
  auto pos = s.find("..");
  if (pos == std::string::npos) {
    Int k = int_parse(s);
    if (k < 0) throw UsageError("coordinates must be >= 0");
    out.push_back(k);
    return out;
  }
  Int from = int_parse(s.substr(0, pos));
  Int to = int_parse(s.substr(pos + 2));
  if (from < 0 || to < from)
    throw UsageError("coordinate range must be A..B with 0 <= A <= B");
  if (to - from + 1 > 100000)
    throw ResourceLimit("coordinate range beyond desk scale");
  for (Int k = from; k <= to; ++k) out.push_back(k);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw IoError(what + ": malformed JSON");
  return j;
}

void emit(const std::string& out_path, const std::string& text,
          std::ostream& out) {
  if (out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw IoError("cannot open " + out_path + " for writing");
  f << text;
  f.flush();
  if (!f.good()) throw IoError("cannot write " + out_path);
}

Json path_json(const std::vector<Int>& path) {
  Json a = Json::array();
  for (const Int& e : path) a.push_back(int_to_json(e));
  return a;
}

Json error_to_json(const Error& e) {
  Json j;
  j["error"] = e.kind;
  j["message"] = e.what();
  if (auto* r = dynamic_cast<const RangeTooLow*>(&e)) j["threshold"] = r->threshold;
  if (auto* w = dynamic_cast<const WindowUnfit*>(&e)) {
    j["neededM"] = w->needed_m;
    j["hint"] = w->hint;
  }
  return j;
}

int exit_for(const std::string& kind) {
  if (kind == "IoError") return 3;
  if (kind == "HorizonExhausted" || kind == "CertificateNotFound") return 1;
  return 2;  // usage, guardrails, invalid instances, exhausted budgets
}

// Smallest window accommodating the given coefficients and branch count.
long derive_window(const std::vector<Rat>& lambda, std::size_t branches) {
  Int m(static_cast<long>(branches));
  if (m < 1) m = 1;
  for (const Rat& l : lambda) {
    if (l == 0) throw InvalidInstance("coefficients must be nonzero");
    Rat mag = rat_abs(l);
    m = max_int(m, max_int(ceil_rat(mag), ceil_rat(Rat(1) / mag)));
  }
  if (!m.fits_slong_p()) throw UsageError("coefficients need an absurd window");
  return m.get_si();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"exact thick-set arithmetic, tree construction, and hull certificates"};
  app.require_subcommand(1);
  std::string config_flag;
  app.add_option("--config", config_flag,
                 "key=value config file (default: $BORELFORGE_CONFIG)");

  // xi
  auto* cmd_xi = app.add_subcommand("xi", "separation thresholds for a window");
  long xi_m = 0;
  cmd_xi->add_option("--m", xi_m, "window parameter")->required();

  // thick
  auto* cmd_thick = app.add_subcommand("thick", "thick-set membership probe");
  long thick_j = 0;
  std::string thick_probe;
  cmd_thick->add_option("--j", thick_j, "family index")->required();
  cmd_thick->add_option("--probe", thick_probe, "rational p/q")->required();
  long thick_budget_v = 0;
  auto* thick_budget_o = cmd_thick->add_option("--bit-budget", thick_budget_v,
                                               "expansion budget in bits");

  // tree build
  auto* cmd_tree = app.add_subcommand("tree", "inductive construction");
  cmd_tree->require_subcommand(1);
  auto* cmd_tree_build =
      cmd_tree->add_subcommand("build", "materialize nodes to depth/fanout");
  long tb_depth = 0, tb_fanout = 0;
  std::string tb_out;
  auto* tb_depth_o = cmd_tree_build->add_option("--depth", tb_depth, "tree depth");
  auto* tb_fanout_o =
      cmd_tree_build->add_option("--fanout", tb_fanout, "children per node");
  auto* tb_out_o = cmd_tree_build->add_option("--out", tb_out, "output file");

  // point eval
  auto* cmd_point = app.add_subcommand("point", "limit points of branches");
  cmd_point->require_subcommand(1);
  auto* cmd_point_eval =
      cmd_point->add_subcommand("eval", "exact coordinates of a branch point");
  std::string pe_path, pe_coords;
  cmd_point_eval->add_option("--path", pe_path, "branch stem, e.g. \"0,0,1\"")
      ->required();
  cmd_point_eval->add_option("--coords", pe_coords, "K or A..B")->required();
  std::string pe_out;
  auto* pe_out_o = cmd_point_eval->add_option("--out", pe_out, "output file");

  // verify lemma1 | claim2 | tree
  auto* cmd_verify = app.add_subcommand("verify", "machine checks");
  cmd_verify->require_subcommand(1);

  auto* cmd_vl = cmd_verify->add_subcommand("lemma1", "separation fuzz");
  long vl_trials = 0, vl_mmax = 0, vl_amax = 12;
  unsigned long long vl_seed = 0;
  std::string vl_out;
  auto* vl_trials_o = cmd_vl->add_option("--trials", vl_trials, "instances");
  auto* vl_mmax_o = cmd_vl->add_option("--m-max", vl_mmax, "largest window");
  auto* vl_seed_o = cmd_vl->add_option("--seed", vl_seed, "fuzz seed");
  cmd_vl->add_option("--a-max", vl_amax, "largest tower index sampled");
  auto* vl_out_o = cmd_vl->add_option("--out", vl_out, "output file");

  auto* cmd_vc = cmd_verify->add_subcommand("claim2", "coordinate lower bound");
  std::string vc_stems, vc_lambda, vc_kfrom, vc_out;
  long vc_kcount = 50, vc_m = 0;
  cmd_vc->add_option("--stems", vc_stems, "branches, e.g. \"0|1\"")->required();
  cmd_vc->add_option("--lambda", vc_lambda, "coefficients, e.g. \"2,-2\"")
      ->required();
  cmd_vc->add_option("--k-from", vc_kfrom, "first coordinate")->required();
  cmd_vc->add_option("--k-count", vc_kcount, "how many coordinates");
  auto* vc_m_o = cmd_vc->add_option("--m", vc_m, "window (default: smallest fit)");
  long vc_mmax = 0;
  auto* vc_mmax_o = cmd_vc->add_option("--m-max", vc_mmax, "window cap");
  auto* vc_out_o = cmd_vc->add_option("--out", vc_out, "output file");

  auto* cmd_vt = cmd_verify->add_subcommand("tree", "construction invariants");
  long vt_depth = 0, vt_fanout = 0, vt_density_r = 3, vt_density_depth = 1;
  std::string vt_out;
  auto* vt_depth_o = cmd_vt->add_option("--depth", vt_depth, "tree depth");
  auto* vt_fanout_o = cmd_vt->add_option("--fanout", vt_fanout, "children per node");
  cmd_vt->add_option("--density-r", vt_density_r,
                     "largest grid resolution exponent");
  cmd_vt->add_option("--density-depth", vt_density_depth,
                     "deepest level running the density surrogate");
  auto* vt_out_o = cmd_vt->add_option("--out", vt_out, "output file");

  // hull encode | distinguish
  auto* cmd_hull = app.add_subcommand("hull", "linear-hull codes");
  cmd_hull->require_subcommand(1);

  auto* cmd_he = cmd_hull->add_subcommand("encode", "evaluate a code");
  std::string he_code, he_coords, he_out;
  cmd_he->add_option("--code", he_code, "code JSON file")->required();
  cmd_he->add_option("--coords", he_coords, "K or A..B")->required();
  auto* he_out_o = cmd_he->add_option("--out", he_out, "output file");

  auto* cmd_hd = cmd_hull->add_subcommand("distinguish", "equality certificate");
  std::string hd_a, hd_b, hd_out;
  long hd_mmax = 0, hd_horizon = 0;
  cmd_hd->add_option("--a", hd_a, "first code JSON file")->required();
  cmd_hd->add_option("--b", hd_b, "second code JSON file")->required();
  auto* hd_mmax_o = cmd_hd->add_option("--m-max", hd_mmax, "window cap");
  auto* hd_horizon_o =
      cmd_hd->add_option("--horizon", hd_horizon, "search width past threshold");
  auto* hd_out_o = cmd_hd->add_option("--out", hd_out, "output file");

  // export (build mode, or --in for a round trip)
  auto* cmd_export = app.add_subcommand("export", "tree document I/O");
  long ex_depth = 0, ex_fanout = 0;
  std::string ex_in, ex_out;
  auto* ex_depth_o = cmd_export->add_option("--depth", ex_depth, "tree depth");
  auto* ex_fanout_o =
      cmd_export->add_option("--fanout", ex_fanout, "children per node");
  auto* ex_in_o =
      cmd_export->add_option("--in", ex_in, "reimport this document instead");
  auto* ex_out_o = cmd_export->add_option("--out", ex_out, "output file");
  ex_in_o->excludes(ex_depth_o);
  ex_in_o->excludes(ex_fanout_o);

  try {
    // Let the global --config flag appear after a subcommand name too.
    std::function<void(CLI::App*)> allow_parent_flags = [&](CLI::App* a) {
      for (CLI::App* sub : a->get_subcommands(nullptr)) {
        sub->fallthrough();
        allow_parent_flags(sub);
      }
    };
    allow_parent_flags(&app);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp&) {
    const CLI::App* active = &app;
    while (!active->get_subcommands().empty())
      active = active->get_subcommands().front();
    out << active->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    Json j;
    j["error"] = "UsageError";
    j["message"] = e.what();
    err << dump_line(j) << "\n";
    const CLI::App* active = &app;
    while (!active->get_subcommands().empty())
      active = active->get_subcommands().front();
    err << active->help();
    return 2;
  }

  try {
    RunConfig cfg;
    std::string config_path = config_flag;
    if (config_path.empty()) {
      const char* env = std::getenv("BORELFORGE_CONFIG");
      if (env != nullptr) config_path = env;
    }
    if (!config_path.empty()) cfg = parse_config_file(config_path, cfg);

    if (app.got_subcommand(cmd_xi)) {
      if (xi_m < 1) throw UsageError("--m must be >= 1");
      Thresholds th = xi_thresholds(xi_m);
      Json j;
      j["m"] = th.m;
      j["xi"] = th.xi;
      j["Xi"] = tf_to_json(th.Xi);
      out << dump_line(j) << "\n";
      return 0;
    }

    if (app.got_subcommand(cmd_thick)) {
      if (thick_j < 0) throw UsageError("--j must be >= 0");
      if (thick_budget_o->count() > 0) cfg.bitBudget = thick_budget_v;
      validate_config(cfg);
      Rat probe = rat_parse(thick_probe);
      bool member = thick_member(Int(thick_j), TowerForm(probe), cfg.bitBudget);
      Json j;
      j["j"] = thick_j;
      j["probe"] = rat_str(probe);
      j["member"] = member;
      out << dump_line(j) << "\n";
      return 0;
    }

    if (app.got_subcommand(cmd_tree) && cmd_tree->got_subcommand(cmd_tree_build)) {
      if (tb_depth_o->count() > 0) cfg.depth = tb_depth;
      if (tb_fanout_o->count() > 0) cfg.fanout = tb_fanout;
      if (tb_out_o->count() > 0) cfg.outPath = tb_out;
      validate_config(cfg);
      Json doc = export_tree(cfg, cfg.depth, cfg.fanout);
      emit(cfg.outPath, dump_doc(doc), out);
      return 0;
    }

    if (app.got_subcommand(cmd_point) && cmd_point->got_subcommand(cmd_point_eval)) {
      if (pe_out_o->count() > 0) cfg.outPath = pe_out;
      validate_config(cfg);
      Branch b = Branch::of(parse_path(pe_path));
      PointEvaluator ev(b);
      Json doc;
      doc["version"] = "1";
      doc["config"] = config_to_json(cfg);
      doc["stem"] = path_json(b.stem);
      doc["values"] = Json::array();
      for (const Int& k : parse_coords(pe_coords)) {
        Json v;
        v["k"] = int_to_json(k);
        v["value"] = value_to_json(ev.at(k));
        doc["values"].push_back(v);
      }
      emit(cfg.outPath, dump_line(doc) + "\n", out);
      return 0;
    }

    if (app.got_subcommand(cmd_verify) && cmd_verify->got_subcommand(cmd_vl)) {
      if (vl_trials_o->count() > 0) cfg.trials = vl_trials;
      if (vl_mmax_o->count() > 0) cfg.mMax = vl_mmax;
      if (vl_seed_o->count() > 0) cfg.seed = vl_seed;
      if (vl_out_o->count() > 0) cfg.outPath = vl_out;
      validate_config(cfg);
      Json head;
      head["version"] = "1";
      head["kind"] = "verify_lemma1";
      head["config"] = config_to_json(cfg);
      head["aMax"] = vl_amax;
      long failures = 0;
      std::string report = lemma1_fuzz(cfg.trials, cfg.mMax, vl_amax, cfg.seed,
                                       failures, cfg.bitBudget);
      emit(cfg.outPath, dump_line(head) + "\n" + report, out);
      return failures == 0 ? 0 : 1;
    }

    if (app.got_subcommand(cmd_verify) && cmd_verify->got_subcommand(cmd_vc)) {
      if (vc_out_o->count() > 0) cfg.outPath = vc_out;
      if (vc_mmax_o->count() > 0) cfg.mMax = vc_mmax;
      validate_config(cfg);
      CombinationSpec spec;
      spec.stems = parse_stems(vc_stems);
      spec.lambda = parse_lambdas(vc_lambda);
      spec.m = vc_m_o->count() > 0 ? vc_m
                                   : derive_window(spec.lambda, spec.stems.size());
      if (spec.m > cfg.mMax)
        throw UsageError("window m = " + std::to_string(spec.m) +
                         " exceeds the cap mMax = " + std::to_string(cfg.mMax));
      Claim2Report rep = claim2_check_range(spec, int_parse(vc_kfrom), vc_kcount,
                                            cfg.bitBudget);
      Json head;
      head["version"] = "1";
      head["kind"] = "verify_claim2";
      head["config"] = config_to_json(cfg);
      head["m"] = spec.m;
      head["stems"] = Json::array();
      for (const Branch& b : spec.stems) head["stems"].push_back(path_json(b.stem));
      head["lambda"] = Json::array();
      for (const Rat& l : spec.lambda) head["lambda"].push_back(rat_str(l));
      head["rE"] = int_to_json(rep.prefix.r);
      head["lE"] = int_to_json(rep.prefix.l);
      head["threshold"] = int_to_json(rep.threshold);
      std::string text = dump_line(head) + "\n";
      for (const Claim2Line& line : rep.lines) {
        Json j;
        j["k"] = int_to_json(line.k);
        j["value"] = value_to_json(line.value);
        j["ok"] = line.ok;
        text += dump_line(j) + "\n";
      }
      Json foot;
      foot["ks"] = static_cast<long long>(rep.lines.size());
      foot["failures"] = rep.failures;
      text += dump_line(foot) + "\n";
      emit(cfg.outPath, text, out);
      return rep.failures == 0 ? 0 : 1;
    }

    if (app.got_subcommand(cmd_verify) && cmd_verify->got_subcommand(cmd_vt)) {
      if (vt_depth_o->count() > 0) cfg.depth = vt_depth;
      if (vt_fanout_o->count() > 0) cfg.fanout = vt_fanout;
      if (vt_out_o->count() > 0) cfg.outPath = vt_out;
      validate_config(cfg);
      Json head;
      head["version"] = "1";
      head["kind"] = "verify_tree";
      head["config"] = config_to_json(cfg);
      head["densityR"] = vt_density_r;
      head["densityDepth"] = vt_density_depth;
      std::string text = dump_line(head) + "\n";
      TreeCheckStats stats =
          verify_tree(cfg.depth, cfg.fanout, vt_density_r, vt_density_depth,
                      [&text](const std::string& msg) {
                        Json j;
                        j["failure"] = msg;
                        text += dump_line(j) + "\n";
                      });
      Json foot;
      foot["nodes"] = stats.nodes;
      foot["siblingPairs"] = stats.sibling_pairs;
      foot["containmentChecks"] = stats.containment_checks;
      foot["densityTargets"] = stats.density_targets;
      foot["failures"] = stats.failures;
      text += dump_line(foot) + "\n";
      emit(cfg.outPath, text, out);
      return stats.failures == 0 ? 0 : 1;
    }

    if (app.got_subcommand(cmd_hull) && cmd_hull->got_subcommand(cmd_he)) {
      if (he_out_o->count() > 0) cfg.outPath = he_out;
      validate_config(cfg);
      HullCode code = hull_code_from_json(
          parse_json_text(read_file(he_code), he_code));
      Json doc;
      doc["version"] = "1";
      doc["config"] = config_to_json(cfg);
      doc["code"] = hull_code_to_json(code);
      doc["values"] = Json::array();
      for (const Int& k : parse_coords(he_coords)) {
        Json v;
        v["k"] = int_to_json(k);
        v["value"] = value_to_json(hull_eval(code, k));
        doc["values"].push_back(v);
      }
      emit(cfg.outPath, dump_line(doc) + "\n", out);
      return 0;
    }

    if (app.got_subcommand(cmd_hull) && cmd_hull->got_subcommand(cmd_hd)) {
      if (hd_mmax_o->count() > 0) cfg.mMax = hd_mmax;
      if (hd_horizon_o->count() > 0) cfg.horizon = hd_horizon;
      if (hd_out_o->count() > 0) cfg.outPath = hd_out;
      validate_config(cfg);
      HullCode a = hull_code_from_json(parse_json_text(read_file(hd_a), hd_a));
      HullCode b = hull_code_from_json(parse_json_text(read_file(hd_b), hd_b));
      HullDistinction d =
          hull_distinguish(a, b, cfg.mMax, cfg.horizon, cfg.bitBudget);
      Json doc;
      doc["version"] = "1";
      doc["config"] = config_to_json(cfg);
      doc["identical"] = d.identical;
      if (!d.identical) {
        doc["m"] = d.m;
        doc["threshold"] = int_to_json(d.threshold);
        doc["k"] = int_to_json(d.k);
        doc["value"] = value_to_json(d.value);
      }
      emit(cfg.outPath, dump_line(doc) + "\n", out);
      return 0;
    }

    if (app.got_subcommand(cmd_export)) {
      if (ex_out_o->count() > 0) cfg.outPath = ex_out;
      if (ex_in_o->count() > 0) {
        Json doc = import_tree(parse_json_text(read_file(ex_in), ex_in));
        emit(cfg.outPath, dump_doc(doc), out);
        return 0;
      }
      if (ex_depth_o->count() > 0) cfg.depth = ex_depth;
      if (ex_fanout_o->count() > 0) cfg.fanout = ex_fanout;
      validate_config(cfg);
      Json doc = export_tree(cfg, cfg.depth, cfg.fanout);
      emit(cfg.outPath, dump_doc(doc), out);
      return 0;
    }

    throw UsageError("no subcommand executed");
  } catch (const Error& e) {
    err << dump_line(error_to_json(e)) << "\n";
    return exit_for(e.kind);
  } catch (const Json::exception& e) {
    Json j;
    j["error"] = "IoError";
    j["message"] = e.what();
    err << dump_line(j) << "\n";
    return 3;
  }
}

}  // namespace borelforge
