#include "mef/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mef;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
  auto path = std::filesystem::temp_directory_path() / ("mef_cli_test_" + name + ".mef");
  std::ofstream(path) << text;
  return path.string();
}

const std::string kSamples = MEF_SAMPLES_DIR;

TEST(Cli, CounterexampleIsZero) {
  Result r = run({"check-zero", kSamples + "/counterexample.mef"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "f: Zero\ncertificate: N = 2\n");
}

TEST(Cli, CounterexampleJson) {
  Result r = run({"--json", "check-zero", kSamples + "/counterexample.mef"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["verdict"], "Zero");
  EXPECT_EQ(j["certificate"], 2);
  EXPECT_TRUE(j["witness"].is_null());
  EXPECT_FALSE(j.contains("trace"));
}

TEST(Cli, PerturbedIsNonZero) {
  Result r = run({"check-zero", kSamples + "/perturbed.mef", "--json"});
  EXPECT_EQ(r.code, 1);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "NonZero");
  EXPECT_EQ(j["cause"]["kind"], "non-torsion-coefficient");
  EXPECT_EQ(j["witness"], nlohmann::json::array({1}));
  EXPECT_TRUE(j["certificate"].is_null());
}

TEST(Cli, TraceStepsAllHold) {
  Result r = run({"check-zero", "--json", "--trace", kSamples + "/counterexample.mef"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  ASSERT_TRUE(j["trace"].is_array());
  EXPECT_FALSE(j["trace"].empty());
  for (const auto& s : j["trace"]) {
    EXPECT_TRUE(s["holds"].get<bool>()) << s.dump();
    for (const char* k : {"rule", "input", "output", "identity"}) EXPECT_TRUE(s[k].is_string());
  }
  Result human = run({"check-zero", "--trace", kSamples + "/counterexample.mef"});
  EXPECT_NE(human.out.find("trace [residue-constancy] ok"), std::string::npos);
  EXPECT_EQ(human.out.find("FAILED"), std::string::npos);
}

TEST(Cli, Integrate) {
  std::string file = write_temp("integrate", "ring: Z\nvars: 1\nfn f = g1 * L^(-g1)\n");
  Result r = run({"integrate", file});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "L/(L-1)^2\n");
  Result j = run({"integrate", "--json", file});
  EXPECT_EQ(nlohmann::json::parse(j.out)["integral"], "L/(L-1)^2");
}

TEST(Cli, NotIntegrable) {
  std::string file = write_temp("grows", "ring: Z\nvars: 1\nfn f = L^(g1)\n");
  Result r = run({"integrate", file});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("NotIntegrable"), std::string::npos);
  Result c = run({"check-integrable", file});
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.out.find("witness: (0)"), std::string::npos);
}

TEST(Cli, CheckIntegrableHiddenZero) {
  std::string file =
      write_temp("hidden", "ring: Z x Z/2\nvars: 1\nconst c = <0, 1>\nfn f = c*g1*L^(g1) + c*g1^2*L^(g1)\n");
  Result r = run({"check-integrable", file});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("integral: <0, 0>"), std::string::npos);
}

TEST(Cli, Eval) {
  std::string file = write_temp("eval", "ring: Z\nvars: 1\nfn f = L^(2*g1) + g1\n");
  Result r = run({"eval", file, "--at", "3"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "L^6 + 3\n");
  EXPECT_EQ(run({"eval", file, "--at", "1,2"}).code, 2);
  EXPECT_EQ(run({"eval", file, "--at", "x"}).code, 2);
  EXPECT_EQ(run({"eval", file, "--at", "-1"}).code, 2);
  EXPECT_EQ(run({"eval", file}).code, 2);
}

TEST(Cli, CheckTorsion) {
  EXPECT_EQ(run({"check-torsion", kSamples + "/counterexample.mef"}).code, 0);
  Result r = run({"check-torsion", kSamples + "/perturbed.mef"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("NonTorsion"), std::string::npos);
}

TEST(Cli, Equal) {
  std::string file = write_temp("equal",
                                "ring: Z x Z/2\nvars: 1\nconst c = <0, 1>\n"
                                "fn a = c*g1*(g1 + 1)\nfn b = 0\nfn d = g1\n");
  Result same = run({"equal", file, "a", "b"});
  EXPECT_EQ(same.code, 0) << same.err;
  EXPECT_EQ(same.out.substr(0, 6), "a = b\n");
  Result diff = run({"equal", file, "a", "d", "--json"});
  EXPECT_EQ(diff.code, 1);
  EXPECT_EQ(nlohmann::json::parse(diff.out)["verdict"], "NotEqual");
  EXPECT_EQ(run({"equal", file, "a"}).code, 2);
  EXPECT_EQ(run({"equal", file, "a", "zz"}).code, 2);
}

TEST(Cli, Normalize) {
  std::string file = write_temp("normalize", "ring: Z\nvars: 1\n# comment\nfn f = (L^2-1)/(L-1)*g1 + g1 - g1\n");
  Result r = run({"normalize", file});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ring: Z\nvars: 1\nfn f = (L + 1)*g1\n");
}

TEST(Cli, NamedFunctionSelection) {
  Result r = run({"check-zero", kSamples + "/mixed.mef", "decaying"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("decaying: NonZero", 0), 0u);
  EXPECT_EQ(run({"check-zero", kSamples + "/mixed.mef", "missing"}).code, 2);
}

TEST(Cli, WitnessBoundFlag) {
  std::string file = write_temp("bound", "ring: Z\nvars: 1\nfn f = g1*(g1-1)*(g1-2)\n");
  Result capped = run({"check-zero", "--witness-bound", "2", file, "--json"});
  EXPECT_EQ(capped.code, 1);
  EXPECT_TRUE(nlohmann::json::parse(capped.out)["witness"].is_null());
  Result full = run({"check-zero", file, "--json"});
  EXPECT_EQ(nlohmann::json::parse(full.out)["witness"], nlohmann::json::array({3}));
  EXPECT_EQ(run({"check-zero", "--witness-bound", "0", file}).code, 2);
}

TEST(Cli, MaxEulerianFlag) {
  std::string file = write_temp("eulerian", "ring: Z\nvars: 1\nfn f = g1^3 * L^(-g1)\n");
  EXPECT_EQ(run({"integrate", file}).code, 0);
  Result r = run({"integrate", "--max-eulerian", "2", file});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("Eulerian"), std::string::npos);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate", "x.mef"}).code, 2);
  EXPECT_EQ(run({"check-zero", "/nonexistent/file.mef"}).code, 2);
  std::string bad = write_temp("bad", "ring: Z\nvars: 1\nfn f = 1/(L+1)\n");
  Result r = run({"check-zero", bad});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find(":3:12: denominators must be products"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, OutputIsDeterministic) {
  for (const char* cmd : {"check-zero", "check-integrable", "check-torsion"}) {
    Result a = run({cmd, "--json", "--trace", kSamples + "/mixed.mef"});
    Result b = run({cmd, "--json", "--trace", kSamples + "/mixed.mef"});
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

}  // namespace
