#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "borelforge/cli.hpp"
#include "borelforge/json_io.hpp"

namespace py = pybind11;
namespace bf = borelforge;

namespace {

std::vector<bf::Int> to_path(const std::vector<long>& raw) {
  std::vector<bf::Int> out;
  out.reserve(raw.size());
  for (long e : raw) {
    if (e < 0) throw bf::UsageError("path entries must be >= 0");
    out.emplace_back(e);
  }
  return out;
}

bf::TreeNode node_at(const std::vector<long>& raw) {
  bf::TreeNode node = bf::make_root();
  for (const bf::Int& e : to_path(raw)) node = bf::make_child(node, e);
  return node;
}

bf::TowerForm value_from_text(const std::string& s) {
  bf::Json j = bf::Json::parse(s, nullptr, false);
  if (j.is_discarded()) throw bf::IoError("malformed value JSON");
  return bf::value_from_json(j);
}

bf::HullCode code_from_text(const std::string& s) {
  bf::Json j = bf::Json::parse(s, nullptr, false);
  if (j.is_discarded()) throw bf::IoError("malformed code JSON");
  return bf::hull_code_from_json(j);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact thick-set arithmetic, tree construction, and hull codes";

  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const bf::Error& e) {
      PyErr_SetString(PyExc_RuntimeError,
                      (e.kind + ": " + std::string(e.what())).c_str());
    }
  });

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int status = bf::run(args, out, err);
        return py::make_tuple(status, out.str(), err.str());
      },
      py::arg("args"),
      "Full command-line surface: returns (exit_status, stdout, stderr).");

  m.def(
      "xi_json",
      [](long window) {
        bf::Thresholds th = bf::xi_thresholds(window);
        bf::Json j;
        j["m"] = th.m;
        j["xi"] = th.xi;
        j["Xi"] = bf::tf_to_json(th.Xi);
        return bf::dump_line(j);
      },
      py::arg("m"));

  m.def(
      "thick_member",
      [](long j, const std::string& probe) {
        return bf::thick_member(bf::Int(j), bf::TowerForm(bf::rat_parse(probe)));
      },
      py::arg("j"), py::arg("probe"));

  m.def(
      "marker_json",
      [](long j, long n) {
        return bf::dump_line(bf::value_to_json(bf::marker(bf::Int(j), bf::Int(n))));
      },
      py::arg("j"), py::arg("n"));

  m.def(
      "canonical_json",
      [](long j, long n) {
        return bf::dump_line(
            bf::value_to_json(bf::canonical_element(bf::Int(j), bf::Int(n))));
      },
      py::arg("j"), py::arg("n"));

  m.def(
      "path_code",
      [](const std::vector<long>& path) {
        return bf::int_str(bf::node_family_index(to_path(path)));
      },
      py::arg("path"));

  m.def(
      "path_decode",
      [](const std::string& code) {
        std::vector<long> out;
        for (const bf::Int& e : bf::node_family_decode(bf::int_parse(code)))
          out.push_back(e.get_si());
        return out;
      },
      py::arg("code"));

  m.def(
      "family_of_path",
      [](const std::vector<long>& path) {
        return bf::int_str(bf::family_assign(to_path(path)));
      },
      py::arg("path"));

  m.def(
      "tree_child_json",
      [](const std::vector<long>& parent, long i) {
        return bf::dump_line(bf::node_to_json(bf::make_child(node_at(parent), bf::Int(i))));
      },
      py::arg("parent"), py::arg("i"));

  m.def(
      "eval_json",
      [](const std::vector<long>& stem, long k) {
        bf::Branch b = bf::Branch::of(to_path(stem));
        return bf::dump_line(bf::value_to_json(bf::eval_coordinate(b, bf::Int(k))));
      },
      py::arg("stem"), py::arg("k"));

  m.def(
      "certificate_json",
      [](const std::vector<long>& parent, long i, long i2) {
        bf::SeparationCertificate c =
            bf::disjointness_certificate(to_path(parent), bf::Int(i), bf::Int(i2));
        bf::Json j;
        j["coordinate"] = bf::int_str(c.coordinate);
        j["gap"] = bf::rat_str(c.gap);
        j["valueLo"] = bf::value_to_json(c.value_lo);
        j["valueHi"] = bf::value_to_json(c.value_hi);
        j["levelLo"] = bf::int_str(c.level_lo);
        j["levelHi"] = bf::int_str(c.level_hi);
        return bf::dump_line(j);
      },
      py::arg("parent"), py::arg("i"), py::arg("i2"));

  m.def(
      "lemma1_fuzz",
      [](long trials, long m_max, long a_max, unsigned long long seed) {
        long failures = 0;
        std::string report = bf::lemma1_fuzz(trials, m_max, a_max, seed, failures);
        return py::make_tuple(report, failures);
      },
      py::arg("trials"), py::arg("m_max"), py::arg("a_max"), py::arg("seed"),
      "Returns (json_lines_report, failures).");

  m.def(
      "r_and_l",
      [](const std::vector<std::vector<long>>& stems) {
        std::vector<bf::Branch> E;
        E.reserve(stems.size());
        for (const auto& s : stems) E.push_back(bf::Branch::of(to_path(s)));
        bf::PrefixStats st = bf::r_and_l(E);
        return py::make_tuple(bf::int_str(st.r), bf::int_str(st.l));
      },
      py::arg("stems"));

  m.def(
      "hull_eval_json",
      [](const std::string& code, long k) {
        return bf::dump_line(
            bf::value_to_json(bf::hull_eval(code_from_text(code), bf::Int(k))));
      },
      py::arg("code"), py::arg("k"));

  m.def(
      "hull_distinguish_json",
      [](const std::string& a, const std::string& b, long m_max, long horizon) {
        bf::HullDistinction d = bf::hull_distinguish(
            code_from_text(a), code_from_text(b), m_max, horizon);
        bf::Json j;
        j["identical"] = d.identical;
        if (!d.identical) {
          j["m"] = d.m;
          j["threshold"] = bf::int_str(d.threshold);
          j["k"] = bf::int_str(d.k);
          j["value"] = bf::value_to_json(d.value);
        }
        return bf::dump_line(j);
      },
      py::arg("a"), py::arg("b"), py::arg("m_max") = 3, py::arg("horizon") = 500);

  m.def(
      "tf_add_json",
      [](const std::string& x, const std::string& y) {
        return bf::dump_line(bf::value_to_json(
            bf::tf_add(value_from_text(x), value_from_text(y))));
      },
      py::arg("x"), py::arg("y"));

  m.def(
      "tf_scale_json",
      [](const std::string& q, const std::string& x) {
        return bf::dump_line(bf::value_to_json(
            bf::tf_scale(bf::rat_parse(q), value_from_text(x))));
      },
      py::arg("q"), py::arg("x"));

  m.def(
      "tf_sign",
      [](const std::string& x) { return bf::tf_sign(value_from_text(x)); },
      py::arg("x"));

  m.def(
      "tf_abs_ge",
      [](const std::string& x, const std::string& bound) {
        return bf::tf_abs_ge(value_from_text(x), bf::rat_parse(bound));
      },
      py::arg("x"), py::arg("bound"));
}
