#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "borelforge/cli.hpp"
#include "borelforge/json_io.hpp"

using namespace borelforge;

namespace {

struct RunResult {
  int status;
  std::string out;
  std::string err;
};

RunResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int status = run(args, out, err);
  return {status, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

Json parse(const std::string& text) {
  Json j = Json::parse(text, nullptr, false);
  REQUIRE_FALSE(j.is_discarded());
  return j;
}

}  // namespace

TEST_CASE("threshold output is byte-pinned") {
  RunResult r = cli({"xi", "--m", "2"});
  CHECK(r.status == 0);
  CHECK(r.out == "{\"m\":2,\"xi\":3,\"Xi\":{\"terms\":[{\"a\":3,\"q\":\"1\"}],\"r\":\"3\"}}\n");
  CHECK(r.err.empty());

  RunResult bad = cli({"xi", "--m", "0"});
  CHECK(bad.status == 2);
  CHECK(parse(bad.err).at("error").get<std::string>() == "UsageError");
}

TEST_CASE("membership probe output") {
  RunResult r = cli({"thick", "--j", "0", "--probe", "4"});
  CHECK(r.status == 0);
  CHECK(r.out == "{\"j\":0,\"probe\":\"4\",\"member\":true}\n");
  RunResult f = cli({"thick", "--j", "0", "--probe", "6"});
  CHECK(f.out == "{\"j\":0,\"probe\":\"6\",\"member\":false}\n");
  RunResult frac = cli({"thick", "--j", "0", "--probe", "7/2"});
  CHECK(frac.out == "{\"j\":0,\"probe\":\"7/2\",\"member\":true}\n");
}

TEST_CASE("guardrails map to usage exits") {
  CHECK(cli({"tree", "build", "--depth", "9"}).status == 2);
  CHECK(cli({"tree", "build", "--fanout", "17"}).status == 2);
  CHECK(cli({"verify", "claim2", "--stems", "", "--lambda", "1", "--k-from",
             "10", "--k-count", "1"})
            .status == 2);
  CHECK(cli({"no-such-command"}).status == 2);
  CHECK(cli({"xi"}).status == 2);  // missing required flag
  CHECK(cli({}).status == 2);

  RunResult low = cli({"verify", "claim2", "--stems", "", "--lambda", "1",
                       "--k-from", "10", "--k-count", "1"});
  Json e = parse(low.err);
  CHECK(e.at("error").get<std::string>() == "RangeTooLow");
  CHECK(e.at("threshold").get<std::string>() == "18");
}

TEST_CASE("help is not an error") {
  RunResult top = cli({"--help"});
  CHECK(top.status == 0);
  CHECK(top.out.find("xi") != std::string::npos);
  RunResult sub = cli({"verify", "lemma1", "--help"});
  CHECK(sub.status == 0);
  CHECK(sub.out.find("--trials") != std::string::npos);
}

TEST_CASE("point evaluation output") {
  RunResult r = cli({"point", "eval", "--path", "", "--coords", "0..2"});
  CHECK(r.status == 0);
  Json j = parse(r.out);
  CHECK(j.at("stem").size() == 0);
  REQUIRE(j.at("values").size() == 3);
  CHECK(j.at("values")[0].at("value").get<std::string>() == "7/2");
  CHECK(j.at("values")[1].at("value").get<std::string>() == "3");
  CHECK(j.at("values")[2].at("value").get<std::string>() == "7/2");

  CHECK(cli({"point", "eval", "--path", "1,,2", "--coords", "0"}).status == 2);
  CHECK(cli({"point", "eval", "--path", "-3", "--coords", "0"}).status == 2);
  CHECK(cli({"point", "eval", "--path", "", "--coords", "5..4"}).status == 2);
}

TEST_CASE("fuzz runs are reproducible through the command surface") {
  std::vector<std::string> args{"verify", "lemma1", "--trials", "100",
                                "--m-max", "2",     "--seed",   "7"};
  RunResult r1 = cli(args);
  RunResult r2 = cli(args);
  CHECK(r1.status == 0);
  CHECK(r1.out == r2.out);
  CHECK(r1.out.find("\"failures\":0") != std::string::npos);
}

TEST_CASE("tree export and reimport are byte-identical") {
  std::string p1 = "/tmp/borelforge_test_t1.json";
  std::string p2 = "/tmp/borelforge_test_t2.json";
  RunResult r1 = cli({"export", "--depth", "1", "--fanout", "2", "--out", p1});
  CHECK(r1.status == 0);
  Json doc = parse(slurp(p1));
  CHECK(doc.at("version").get<std::string>() == "1");
  REQUIRE(doc.at("nodes").size() == 3);
  CHECK(doc.at("nodes")[0].at("path").size() == 0);
  CHECK(doc.at("nodes")[1].at("l").get<long>() == 4);
  CHECK(doc.at("nodes")[1].at("M").get<long>() == 1);
  CHECK(doc.at("nodes")[1].at("window").at("0").get<std::string>() == "7/2");
  CHECK(doc.at("nodes")[2].at("window").at("1").get<std::string>() == "7/2");

  RunResult r2 = cli({"export", "--in", p1, "--out", p2});
  CHECK(r2.status == 0);
  CHECK(slurp(p1) == slurp(p2));

  // Same bytes whether streamed or written to a file.
  RunResult direct = cli({"tree", "build", "--depth", "1", "--fanout", "2"});
  CHECK(direct.out == slurp(p1));

  CHECK(cli({"export", "--in", "/tmp/borelforge_no_such_file.json"}).status == 3);
  spit("/tmp/borelforge_test_garbage.json", "{not json");
  CHECK(cli({"export", "--in", "/tmp/borelforge_test_garbage.json"}).status == 3);
  CHECK(cli({"tree", "build", "--out", "/tmp/no-such-dir/x.json"}).status == 3);
}

TEST_CASE("configuration layering") {
  std::string cfg = "/tmp/borelforge_test_cfg.txt";
  spit(cfg, "depth=2\nfanout=3\n");

  RunResult from_file = cli({"tree", "build", "--config", cfg});
  Json j1 = parse(from_file.out);
  CHECK(j1.at("depth").get<long>() == 2);
  CHECK(j1.at("fanout").get<long>() == 3);

  RunResult overridden = cli({"tree", "build", "--config", cfg, "--depth", "1"});
  Json j2 = parse(overridden.out);
  CHECK(j2.at("depth").get<long>() == 1);
  CHECK(j2.at("fanout").get<long>() == 3);

  ::setenv("BORELFORGE_CONFIG", cfg.c_str(), 1);
  RunResult from_env = cli({"tree", "build"});
  ::unsetenv("BORELFORGE_CONFIG");
  Json j3 = parse(from_env.out);
  CHECK(j3.at("depth").get<long>() == 2);
  CHECK(j3.at("fanout").get<long>() == 3);

  spit(cfg, "depth=not-a-number\n");
  CHECK(cli({"tree", "build", "--config", cfg}).status == 2);
  CHECK(cli({"tree", "build", "--config", "/tmp/borelforge_no_cfg"}).status == 3);
}

TEST_CASE("hull commands") {
  std::string pa = "/tmp/borelforge_test_a.json";
  std::string pb = "/tmp/borelforge_test_b.json";
  spit(pa, R"({"lambda":["1"],"stems":[[]]})");
  spit(pb, R"({"lambda":["1"],"stems":[[1]]})");

  RunResult enc = cli({"hull", "encode", "--code", pa, "--coords", "19..20"});
  CHECK(enc.status == 0);
  Json je = parse(enc.out);
  CHECK(je.at("code").at("lambda")[0].get<std::string>() == "1");
  CHECK(je.at("values").size() == 2);

  RunResult dis = cli({"hull", "distinguish", "--a", pa, "--b", pb});
  CHECK(dis.status == 0);
  Json jd = parse(dis.out);
  CHECK(jd.at("identical").get<bool>() == false);
  CHECK(jd.at("m").get<long>() == 2);
  CHECK(jd.at("threshold").get<long>() == 259);
  CHECK(jd.at("k").get<long>() == 260);

  RunResult same = cli({"hull", "distinguish", "--a", pa, "--b", pa});
  CHECK(same.status == 0);
  CHECK(parse(same.out).at("identical").get<bool>() == true);

  spit(pb, R"({"lambda":["9/10"],"stems":[[]]})");
  RunResult unfit = cli({"hull", "distinguish", "--a", pa, "--b", pb});
  CHECK(unfit.status == 2);
  Json ju = parse(unfit.err);
  CHECK(ju.at("error").get<std::string>() == "WindowUnfit");
  CHECK(ju.at("neededM").get<long>() == 10);
  CHECK(ju.at("hint").get<std::string>() == "scale both codes by 4");
}

TEST_CASE("window cap applies to derived and explicit windows") {
  // lambda 1/4 needs m = 4 > default cap 3.
  std::string pa = "/tmp/borelforge_test_w.json";
  spit(pa, R"({"lambda":["1/4"],"stems":[[]]})");
  RunResult derived = cli({"verify", "claim2", "--stems", "", "--lambda",
                           "1/4", "--k-from", "65541", "--k-count", "1"});
  CHECK(derived.status == 2);
  CHECK(parse(derived.err).at("error").get<std::string>() == "UsageError");

  RunResult lifted = cli({"verify", "claim2", "--stems", "", "--lambda", "1/4",
                          "--k-from", "65541", "--k-count", "1", "--m-max", "4"});
  CHECK(lifted.status == 0);

  RunResult forced = cli({"verify", "claim2", "--stems", "", "--lambda", "1",
                          "--m", "2", "--k-from", "260", "--k-count", "2"});
  CHECK(forced.status == 0);
  Json head = parse(forced.out.substr(0, forced.out.find('\n')));
  CHECK(head.at("m").get<long>() == 2);
  CHECK(head.at("threshold").get<long>() == 259);
}
