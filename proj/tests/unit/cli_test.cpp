#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include <nlohmann/json.hpp>

#include "latgeo/cli.hpp"

using latgeo::cli::run;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
  json doc() const { return json::parse(out); }
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, TranslateShape) {
  const Result r = call({"translate", "x1 = x2", "-d", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.doc();
  EXPECT_EQ(j["command"], "translate");
  EXPECT_EQ(j["config"]["d"], 2);
  EXPECT_EQ(j["variables"], json({"x1", "x2"}));
  EXPECT_TRUE(j.contains("formula"));
  EXPECT_TRUE(j["stats"]["quantifier_free"].get<bool>());
  const json s = call({"translate", "x1 = x2", "-d", "2", "--stats"}).doc();
  EXPECT_FALSE(s.contains("formula"));
  EXPECT_EQ(s["stats"], j["stats"]);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(call({"translate", "x1 = = x2"}).code, latgeo::cli::BadInput);
  EXPECT_EQ(call({"translate", "x1 = x2", "--field", "real"}).code, latgeo::cli::BadInput);
  EXPECT_EQ(call({"nosuch"}).code, latgeo::cli::BadInput);
  EXPECT_EQ(call({"--help"}).code, latgeo::cli::Ok);
  EXPECT_EQ(call({"translate", "x1 + x2 = x3'", "-d", "3"}).code, latgeo::cli::Capacity);
  EXPECT_EQ(call({"frame-encode", "x1 = 0", "--points", "1", "-d", "3", "--homog"}).code, latgeo::cli::Capacity);
  EXPECT_EQ(call({"homog", "x1 = x2"}).code, latgeo::cli::BadInput);
}

TEST(Cli, VerifyAgreesAndDetectsFaults) {
  const Result ok = call({"verify", "x1 + x2 = x3'", "-d", "2", "-n", "60", "--seed", "5"});
  ASSERT_EQ(ok.code, 0) << ok.err;
  EXPECT_EQ(ok.doc()["summary"], "60/60 agree");
  const Result bad = call({"verify", "x1 = x2", "-d", "2", "-n", "60", "--seed", "5", "--inject-fault"});
  EXPECT_EQ(bad.code, latgeo::cli::Disagreement);
  EXPECT_TRUE(bad.doc().contains("counterexample"));
  const Result h = call({"verify", "x3 = x1 + x2", "-d", "3", "--homog", "--dims", "1,1,2", "-n", "40"});
  ASSERT_EQ(h.code, 0) << h.err;
  EXPECT_EQ(h.doc()["summary"], "40/40 agree");
}

TEST(Cli, Plucker) {
  const Result r = call({"plucker", "[[1,0],[0,1],[0,0]]"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.doc();
  EXPECT_EQ(j["coordinates"]["1,2"], "1");
  EXPECT_EQ(j["coordinates"]["2,3"], "0");
  EXPECT_TRUE(j["member"].get<bool>());
  const Result rt = call({"plucker", "[[1,2],[3,4],[5,6]]", "--roundtrip"});
  EXPECT_EQ(rt.code, 0) << rt.err;
  const Result miss = call({"plucker", R"({"1,2":"1","3,4":"1"})", "--check", "-d", "4"});
  ASSERT_EQ(miss.code, 0) << miss.err;
  EXPECT_FALSE(miss.doc()["member"].get<bool>());
  EXPECT_EQ(call({"plucker", "[[1,0],[0"}).code, latgeo::cli::BadInput);
}

TEST(Cli, EvalAtGivenMatrices) {
  const Result r = call({"eval", "x1 = x2", "-d", "2", "--at", "[[[1,0],[0,0]],[[2,0],[0,0]]]"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.doc()["value"].get<bool>());
  const Result f = call({"eval", "x1 = x2'", "-d", "2", "--at", "[[[1,0],[0,0]],[[2,0],[0,0]]]"});
  EXPECT_FALSE(f.doc()["value"].get<bool>());
}

TEST(Cli, Deterministic) {
  const std::vector<std::vector<std::string>> cmds{
      {"verify", "x1 & x2 = 0", "-d", "2", "-n", "30", "--seed", "9"},
      {"eval", "x1 + x2 = 1", "-d", "3", "--seed", "4"},
      {"frame-encode", "x1*x1 - 2 != 0", "--points", "1", "-d", "3", "--check", "-n", "10"}};
  for (const auto& c : cmds) {
    const Result a = call(c), b = call(c);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Cli, CapFromEnvironmentAndFlag) {
  ::setenv("LATGEO_CAP", "10", 1);
  EXPECT_EQ(call({"translate", "x1 = x2", "-d", "2", "--stats"}).code, latgeo::cli::Capacity);
  EXPECT_EQ(call({"translate", "x1 = x2", "-d", "2", "--stats", "--cap-branches", "100"}).code, latgeo::cli::Ok);
  ::unsetenv("LATGEO_CAP");
  EXPECT_EQ(call({"translate", "x1 = x2", "-d", "2", "--stats"}).code, latgeo::cli::Ok);
}
