#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "zaslab/scenario.hpp"

using namespace zaslab;
namespace fs = std::filesystem;

namespace {

fs::path scratchDir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("zaslab_test_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int runCli(const std::string& args, const fs::path& stdout_file = "/dev/null") {
  const std::string cmd = std::string(ZASLAB_CLI_PATH) + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path writeScenario(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  io::writeFile(p.string(), text);
  return p;
}

}  // namespace

TEST(Scenario, ParsesMinimalMassScenario) {
  const Scenario s = parseScenario(R"({"profile":{"kind":"flat"},"command":"mass","params":{"r":1}})");
  EXPECT_EQ(s.command, Command::mass);
  ASSERT_TRUE(s.params.r.has_value());
  EXPECT_EQ(*s.params.r, 1.0);
  EXPECT_EQ(s.params.t_max, 10.0);
  EXPECT_EQ(s.params.n_samples, 512);
  EXPECT_EQ(s.params.tolerances.limit, 1e-4);
  EXPECT_EQ(s.format, OutputFormat::json);
}

TEST(Scenario, ParsesVerifyScenario) {
  const Scenario s = parseScenario(
      R"({"profile":{"kind":"negSchwarzschild","params":{"m":-1}},"command":"verify","params":{"suite":"penrose"}})");
  EXPECT_EQ(s.command, Command::verify);
  EXPECT_EQ(s.params.suite, "penrose");
}

TEST(Scenario, MissingProfileIsParseError) {
  EXPECT_THROW(parseScenario(R"({"command":"flow"})"), ParseError);
  EXPECT_NO_THROW(parseScenario(R"({"command":"verify"})"));
}

TEST(Scenario, RejectsUnknownKeysAtEveryLevel) {
  EXPECT_THROW(parseScenario(R"({"profile":{"kind":"flat"},"command":"mass","extra":0})"), ParseError);
  EXPECT_THROW(parseScenario(R"({"profile":{"kind":"flat"},"command":"mass","params":{"radius":1}})"), ParseError);
  EXPECT_THROW(parseScenario(R"({"profile":{"kind":"flat"},"command":"mass","output":{"dir":"x"}})"), ParseError);
  EXPECT_THROW(
      parseScenario(R"({"profile":{"kind":"flat"},"command":"verify","params":{"tolerances":{"absolute":1}}})"),
      ParseError);
  EXPECT_THROW(parseScenario(R"({"profile":{"kind":"flat"},"command":"plot"})"), ParseError);
}

TEST(Scenario, RangeValidation) {
  const std::string ns = R"({"kind":"negSchwarzschild","params":{"m":-1}})";
  EXPECT_THROW(parseScenario(R"({"profile":)" + ns + R"(,"command":"mass","params":{"r":0.5}})"), ValidationError);
  EXPECT_THROW(parseScenario(R"({"profile":)" + ns + R"(,"command":"flow","params":{"r0":1,"t_max":0}})"),
               ValidationError);
  EXPECT_THROW(parseScenario(R"({"profile":)" + ns + R"(,"command":"flow","params":{"r0":1,"n_samples":1}})"),
               ValidationError);
  EXPECT_THROW(parseScenario(R"({"profile":)" + ns + R"(,"command":"flow"})"), ValidationError);
  EXPECT_THROW(parseScenario(R"({"profile":)" + ns + R"(,"command":"verify","params":{"suite":"x"}})"),
               ValidationError);
  EXPECT_THROW(parseScenario(R"({"profile":)" + ns + R"(,"command":"verify","params":{"tolerances":{"limit":-1}}})"),
               ValidationError);
}

TEST(Scenario, RoundTripIsStable) {
  const std::string text =
      R"({"profile":{"kind":"boosted","params":{"r0":0.5,"a":1},"modifiers":[{"type":"bump","center":3,"half_width":1,"amplitude":0.1}]},)"
      R"("command":"flow","params":{"r0":0.6,"t_max":3,"n_samples":17,"tolerances":{"limit":0.001}},)"
      R"("output":{"path":"out/flow.csv","format":"csv"}})";
  const Scenario s = parseScenario(text);
  const io::json once = scenarioToJson(s);
  const io::json twice = scenarioToJson(parseScenario(once.dump()));
  EXPECT_EQ(once, twice);
  EXPECT_EQ(once.at("params").at("tolerances").at("limit"), 0.001);
}

TEST(RunCommand, MassOnNegativeSchwarzschild) {
  const Scenario s =
      parseScenario(R"({"profile":{"kind":"negSchwarzschild","params":{"m":-1}},"command":"mass","params":{"r":1}})");
  std::ostringstream out, err;
  EXPECT_EQ(runCommand(s, {}, out, err), kExitOk);
  const io::json j = io::json::parse(out.str());
  const io::json& hawking = j.at("reports")[0];
  EXPECT_EQ(hawking.at("kind"), "hawking");
  EXPECT_NEAR(hawking.at("value").get<double>(), -1.0, 1e-12);
}

TEST(RunCommand, FlowCsvHasOneJumpAtZero) {
  const Scenario s = parseScenario(
      R"({"profile":{"kind":"posSchwarzschild","params":{"m":1}},"command":"flow","params":{"r0":0.3,"t_max":2,"n_samples":20},"output":{"format":"csv"}})");
  const fs::path dir = scratchDir("flow");
  RunOptions opt;
  opt.out_dir = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(runCommand(s, opt, out, err), kExitOk);
  const std::string csv = io::readFile((dir / "flow.csv").string());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,r,area,H,m_H");
  const io::json jumps = io::json::parse(io::readFile((dir / "flow.jumps.json").string()));
  ASSERT_EQ(jumps.at("jumps").size(), 1u);
  EXPECT_EQ(jumps.at("jumps")[0].at("t"), 0.0);
  EXPECT_NEAR(jumps.at("jumps")[0].at("r_after").get<double>(), 0.5, 1e-10);
}

TEST(RunCommand, VerifyPenroseDefaultCatalog) {
  std::ostringstream out, err;
  EXPECT_EQ(runCommand(parseScenario(R"({"command":"verify","params":{"suite":"penrose"}})"), {}, out, err), kExitOk);
  EXPECT_EQ(io::json::parse(out.str()).at("overall"), "pass");
}

TEST(RunCommand, VerifyFailureExitsOne) {
  // an absurdly tight scale leaves no room for discretization differences
  RunOptions opt;
  opt.tol_scale = 1e-30;
  std::ostringstream out, err;
  EXPECT_EQ(runCommand(parseScenario(R"({"command":"verify","params":{"suite":"resolution"}})"), opt, out, err),
            kExitVerifyFailed);
}

TEST(RunCommand, OutputPathAndSidecar) {
  const fs::path dir = scratchDir("sidecar");
  const std::string text = R"({"profile":{"kind":"flat"},"command":"flow","params":{"r0":1,"t_max":1,"n_samples":5},)"
                           R"("output":{"path":")" + (dir / "trace.csv").string() + R"(","format":"csv"}})";
  std::ostringstream out, err;
  ASSERT_EQ(runCommand(parseScenario(text), {}, out, err), kExitOk);
  EXPECT_TRUE(fs::exists(dir / "trace.csv"));
  EXPECT_TRUE(fs::exists(dir / "trace.jumps.json"));
  EXPECT_TRUE(out.str().empty());
}

TEST(RunCommand, OutputIsByteIdenticalAcrossRuns) {
  const Scenario s = parseScenario(
      R"({"profile":{"kind":"boosted","params":{"r0":0.5,"a":1}},"command":"mass","params":{"r":1}})");
  std::ostringstream a, b, err;
  runCommand(s, {}, a, err);
  runCommand(s, {}, b, err);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratchDir("cli");
  const fs::path mass = writeScenario(
      dir, "mass.json", R"({"profile":{"kind":"negSchwarzschild","params":{"m":-1}},"command":"mass","params":{"r":1}})");
  const fs::path bad = writeScenario(dir, "bad.json", R"({"profile":{"kind":"flat"},"command":"mass","oops":1})");
  const fs::path missing = writeScenario(dir, "missing.json", R"({"command":"flow"})");

  EXPECT_EQ(runCli("mass --scenario " + mass.string()), 0);
  EXPECT_EQ(runCli("--format csv mass --scenario " + mass.string() + " --out " + (dir / "o").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "mass.csv"));
  EXPECT_EQ(runCli("mass --scenario " + bad.string()), 2);
  EXPECT_EQ(runCli("flow --scenario " + missing.string()), 2);
  EXPECT_EQ(runCli("capacity --scenario " + mass.string()), 2);  // command mismatch
  EXPECT_EQ(runCli("mass --scenario " + (dir / "nope.json").string()), 2);
  EXPECT_EQ(runCli("verify --suite bogus"), 2);
  EXPECT_EQ(runCli("frobnicate"), 2);
  EXPECT_EQ(runCli("--help"), 0);
  EXPECT_EQ(runCli("verify --suite penrose"), 0);
  EXPECT_EQ(runCli("verify --suite resolution --tol-scale 1e-30"), 1);
}

TEST(Cli, CatalogFile) {
  const fs::path dir = scratchDir("catalog");
  const fs::path cat = writeScenario(
      dir, "cat.json", R"({"profiles":[{"kind":"boosted","params":{"r0":0.5,"a":1}}]})");
  EXPECT_EQ(runCli("verify --suite resolution --catalog " + cat.string() + " --out " + dir.string()), 0);
  const io::json rep = io::json::parse(io::readFile((dir / "verify_resolution.json").string()));
  EXPECT_EQ(rep.at("cases").size(), 13u);
  const fs::path broken = writeScenario(dir, "broken.json", R"([{"kind":"boosted","params":{"r0":-1,"a":1}}])");
  EXPECT_EQ(runCli("verify --suite penrose --catalog " + broken.string()), 2);
}

TEST(Cli, StdoutMatchesLibrary) {
  const fs::path dir = scratchDir("stdout");
  const std::string text =
      R"({"profile":{"kind":"posSchwarzschild","params":{"m":1}},"command":"flow","params":{"r0":0.3,"t_max":2,"n_samples":20}})";
  const fs::path sc = writeScenario(dir, "flow.json", text);
  ASSERT_EQ(runCli("--format csv flow --scenario " + sc.string(), dir / "stdout.txt"), 0);
  std::ostringstream out, err;
  RunOptions opt;
  opt.format = OutputFormat::csv;
  runCommand(parseScenario(text), opt, out, err);
  EXPECT_EQ(io::readFile((dir / "stdout.txt").string()), out.str());
}
