#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "futura/cli.hpp"
#include "support.hpp"

using namespace futura;
using testing_support::data_path;

namespace {

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

std::string four_timelines_path() { return data_path("four_timelines.json"); }
std::string sea_path() { return data_path("sea.json"); }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

} // namespace

TEST(Cli, EvalTextAndExitCode) {
  const Invocation r = run({"eval", "X X p", "--model", four_timelines_path(), "--timeline", "w0,u,u1,u2", "--index", "0"});
  EXPECT_EQ(r.code, cli::kRefuted);
  EXPECT_EQ(r.out, "X X p does not hold at index 0 of w0 u u1 u2\n");
  const Invocation s = run({"eval", "X p", "--model", four_timelines_path(), "--timeline", "w0,u,u1,u2", "--index", "0"});
  EXPECT_EQ(s.code, cli::kOk);
  EXPECT_EQ(s.out, "X p holds at index 0 of w0 u u1 u2\n");
}

TEST(Cli, EvalAtLaterIndex) {
  const Invocation r = run({"eval", "A X q", "--model", four_timelines_path(), "--timeline", "w0,w1,w2,w3", "--index", "1"});
  EXPECT_EQ(r.code, cli::kRefuted);
  EXPECT_EQ(r.out, "A X q does not hold at index 1 of w0 w1 w2 w3\n");
}

TEST(Cli, EvalJson) {
  const Invocation r = run({"eval", "X q", "--model", four_timelines_path(), "--timeline", "w0,w1,s,s1", "--index", "0",
                     "--format", "json"});
  EXPECT_EQ(r.code, cli::kOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["formula"], "X q");
  EXPECT_EQ(j["holds"], true);
  EXPECT_EQ(j["branch"], Json::parse(R"(["w0","w1","s","s1"])"));
}

TEST(Cli, UpdateRemovesUnreachableNodes) {
  const Invocation r = run({"update", "X q & X X ~r", "--model", four_timelines_path(), "--node", "w0"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out,
            "update with X q & X X ~r at w0\n"
            "removed: u u1 s u2 s1\n"
            "result:\n"
            "  w0 {q} -> w1\n"
            "  w1 {q} -> w2\n"
            "  w2 {q} -> w3 v\n"
            "  w3 {q}\n"
            "  v {r}\n");
}

TEST(Cli, UpdateJsonCarriesTheShrunkModel) {
  const Invocation r = run({"update", "X ~r & X X ~r", "--model", four_timelines_path(), "--node", "w0", "--format", "json"});
  EXPECT_EQ(r.code, cli::kOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["defined"], true);
  EXPECT_EQ(j["removed"], Json::parse(R"(["s","s1"])"));
  const TreeModel m = model_from_json(j["model"]);
  EXPECT_FALSE(m.find("s"));
  EXPECT_TRUE(m.find("u2"));
}

TEST(Cli, UpdateUndefinedAtTimelinePoint) {
  const Invocation r = run({"update", "X p", "--model", four_timelines_path(), "--timeline", "w0,w1,s,s1", "--index", "1"});
  EXPECT_EQ(r.code, cli::kRefuted);
  EXPECT_EQ(r.out, "update with X p at w1 is undefined: not achievable\n");
}

TEST(Cli, UpdateFlagConflicts) {
  EXPECT_EQ(run({"update", "X q", "--model", four_timelines_path(), "--node", "w0", "--index", "1"}).code, cli::kUsage);
  const Invocation r = run({"update", "X q", "--model", four_timelines_path()});
  EXPECT_EQ(r.code, cli::kUsage);
  EXPECT_EQ(r.err, "error: update needs --node or --timeline with --index\n");
  EXPECT_EQ(run({"update", "A q", "--model", four_timelines_path(), "--node", "w0"}).code, cli::kUsage);
}

TEST(Cli, ReduceText) {
  const Invocation r = run({"reduce", "[p] q"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out,
            "input:  [p] q\n"
            "result: p -> q\n"
            "trace (2 steps):\n"
            "  normal-form: [p] q ==> [p | X ~T] q\n"
            "  push-atom: [p | X ~T] q ==> p -> q\n");
}

TEST(Cli, ReduceJsonParsesBack) {
  const Invocation r = run({"reduce", "[X p] A X p", "--format", "json"});
  EXPECT_EQ(r.code, cli::kOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["input"], "[X p] A X p");
  const Formula result = parse(j["result"].get<std::string>());
  EXPECT_FALSE(result.contains_announce());
  EXPECT_FALSE(trace_from_json(j).empty());
}

TEST(Cli, CheckValidRefutesTheSeaBattleConclusion) {
  const Invocation r = run({"check-valid", "A X s | A X ~s", "--atoms", "s", "--depth", "2"});
  EXPECT_EQ(r.code, cli::kRefuted);
  EXPECT_EQ(r.out.rfind("validity of A X s | A X ~s\ncounterexample found at scale (atoms {s}, branch <= 2, depth 2, "
                        "window enumeration; ",
                        0),
            0u);
}

TEST(Cli, CheckValidReportsNoCounterexampleWithScale) {
  const Invocation r = run({"check-valid", "X p | X ~p", "--depth", "3", "--branch", "2"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("no counterexample at scale (atoms {p}, branch <= 2, depth 3"), std::string::npos);
}

TEST(Cli, CheckEquivAndStrategies) {
  for (const char* strategy : {"window", "exhaustive"}) {
    const Invocation r = run({"check-equiv", "[p & X q] r", "[p][X q] r", "--atoms", "p,q,r", "--depth", "2", "--strategy",
                       strategy});
    EXPECT_EQ(r.code, cli::kOk) << strategy;
    EXPECT_EQ(r.out.rfind("equivalence of [p & X q] r and [p] [X q] r\nno counterexample at scale", 0), 0u);
  }
  EXPECT_EQ(run({"check-equiv", "p"}).code, cli::kUsage);
  EXPECT_EQ(run({"check-equiv", "p", "q", "r"}).code, cli::kUsage);
}

TEST(Cli, CheckEntailsJsonCounterexampleReverifies) {
  const Invocation r = run({"check-entails", "X p", "A X p", "--atoms", "p", "--depth", "2", "--format", "json"});
  EXPECT_EQ(r.code, cli::kRefuted);
  const Verdict v = verdict_from_json(Json::parse(r.out));
  ASSERT_TRUE(v.counterexample);
  const auto& c = *v.counterexample;
  EXPECT_TRUE(holds(c.model, c.timeline, c.index, parse("X p")));
  EXPECT_FALSE(holds(c.model, c.timeline, c.index, parse("A X p")));
}

TEST(Cli, EnumerateCounts) {
  const Invocation r = run({"enumerate", "--atoms", "p", "--branch", "2", "--depth", "3"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, "195312 models (atoms {p}, branch <= 2, depth 3)\n");
  const Invocation j = run({"enumerate", "--atoms", "p,q", "--depth", "1", "--count", "3", "--format", "json"});
  const Json doc = Json::parse(j.out);
  EXPECT_EQ(doc["count"], 80);
  ASSERT_EQ(doc["models"].size(), 3u);
  for (const auto& m : doc["models"])
    EXPECT_TRUE(validate(model_from_json(m)).empty());
}

TEST(Cli, FuzzFindsNoFailures) {
  const Invocation r = run({"fuzz", "--count", "20", "--seed", "5"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out.rfind("fuzzed 20 formulas (seeds 5..24, size <= 12) at scale (atoms {p,q}, branch <= 2, depth 3", 0),
            0u);
  EXPECT_NE(r.out.find("0 reductions not equivalent"), std::string::npos);
  const Json j = Json::parse(run({"fuzz", "--count", "5", "--format", "json"}).out);
  EXPECT_TRUE(j["failures"].empty());
}

TEST(Cli, DemoIsByteIdenticalToGolden) {
  const Invocation r = run({"demo-seabattle"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_EQ(r.out, read_file(testing_support::golden_path("demo-seabattle.txt")));
  EXPECT_EQ(run({"demo-seabattle"}).out, r.out);
}

TEST(Cli, DemoJson) {
  const Json j = Json::parse(run({"demo-seabattle", "--format", "json"}).out);
  EXPECT_EQ(j["premises_hold"], true);
  EXPECT_EQ(j["conclusion_fails"], true);
  EXPECT_EQ(j["argument"]["result"], "counterexample");
  EXPECT_EQ(j["truth_table"].size(), 2u);
  EXPECT_EQ(model_from_json(j["model"]), sea_battle::model());
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, cli::kUsage);
  EXPECT_EQ(run({"bogus"}).code, cli::kUsage);
  EXPECT_EQ(run({"check-valid", "p", "--strategy", "fast"}).code, cli::kUsage);
  EXPECT_EQ(run({"check-valid", "p", "--branch", "0"}).code, cli::kUsage);
  const Invocation depth = run({"check-valid", "X X p", "--depth", "1"});
  EXPECT_EQ(depth.code, cli::kUsage);
  EXPECT_EQ(depth.err, "error: horizon 2 exceeds scale depth 1\n");
}

TEST(Cli, InputErrors) {
  const Invocation syntax = run({"eval", "X (", "--model", sea_path(), "--timeline", "w0,u1,v1", "--index", "0"});
  EXPECT_EQ(syntax.code, cli::kUsage);
  EXPECT_EQ(syntax.err, "error: syntax error at 3: unexpected end of input\n");
  EXPECT_EQ(run({"eval", "X X X p", "--model", sea_path(), "--timeline", "w0,u1,v1", "--index", "0"}).code,
            cli::kUsage);
  EXPECT_EQ(run({"eval", "X s", "--model", sea_path(), "--timeline", "w0,u2", "--index", "0"}).code, cli::kUsage);
  EXPECT_EQ(run({"eval", "X s", "--model", data_path("missing.json"), "--timeline", "a", "--index", "0"}).code,
            cli::kUsage);
}

TEST(Cli, HelpSucceeds) {
  const Invocation r = run({"--help"});
  EXPECT_EQ(r.code, cli::kOk);
  EXPECT_NE(r.out.find("check-entails"), std::string::npos);
  EXPECT_EQ(run({"reduce", "--help"}).code, cli::kOk);
}
