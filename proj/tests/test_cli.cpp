#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "qfair/report.hpp"

namespace {

using qfair::report::Json;

struct Run {
  int status = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(QFAIR_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(QFAIR_DATA_DIR) + "/" + name; }

TEST(Cli, AuditWorkedExample) {
  const auto r = run("audit " + data("worked.csv") + " --schema " + data("worked_schema.json") +
                     " --epsilon 0.05 --seed 7");
  EXPECT_EQ(r.status, 2);
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["pre_repair"]["parity"]["subspaces"][0]["probability"].get<double>(), 0.25, 1e-15);
  EXPECT_NEAR(j["pre_repair"]["parity"]["subspaces"][1]["probability"].get<double>(), 0.75, 1e-15);
  EXPECT_FALSE(j["achieved"].get<bool>());
  EXPECT_FALSE(j["explanation"].get<std::string>().empty());
}

TEST(Cli, RepeatedRunsAreByteIdentical) {
  const std::string args = "repair " + data("ages.csv") + " --schema " + data("ages_schema.json") +
                           " --epsilon 0.1 --seed 3 --shots 20000";
  const auto a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty());
  EXPECT_TRUE(Json::parse(a.out).contains("repaired_state"));
}

TEST(Cli, OutputFileMatchesStdout) {
  const auto out = std::filesystem::temp_directory_path() / "qfair_cli_test_report.json";
  const std::string args = "audit " + data("table1.csv") + " --protected x1";
  const auto to_stdout = run(args);
  const auto to_file = run(args + " --output " + out.string());
  EXPECT_EQ(to_stdout.status, 0);
  EXPECT_EQ(to_file.status, 0);
  EXPECT_TRUE(to_file.out.empty());
  std::ifstream in(out);
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  EXPECT_EQ(file, to_stdout.out);
  std::filesystem::remove(out);
}

TEST(Cli, InputErrorsExitThree) {
  EXPECT_EQ(run("audit /nonexistent.csv --protected x1").status, 3);
  EXPECT_EQ(run("audit " + data("table1.csv") + " --protected nope").status, 3);
  EXPECT_EQ(run("audit " + data("table1.csv") + " --protected x1 --epsilon 0.7").status, 3);
  EXPECT_EQ(run("audit").status, 3);
  EXPECT_EQ(run("frobnicate").status, 3);
}

TEST(Cli, Lipschitz) {
  const std::string base = "lipschitz --states " + data("states.json");
  EXPECT_EQ(run(base + " --algorithm " + data("hadamard.json") + " --k 1").status, 0);
  EXPECT_EQ(run(base + " --algorithm " + data("hadamard.json") + " --k 1 --metric fidelity-angle")
                .status,
            0);
  const auto half = run(base + " --algorithm " + data("identity.json") + " --k 0.5");
  EXPECT_EQ(half.status, 2);
  EXPECT_FALSE(Json::parse(half.out)["satisfied"].get<bool>());
  EXPECT_EQ(run(base + " --algorithm " + data("identity.json") + " --k 2").status, 3);
}

TEST(Cli, Metrics) {
  const auto r = run("metrics --rho " + data("ket0.json") + " --sigma " + data("mixed.json"));
  EXPECT_EQ(r.status, 0);
  const Json j = Json::parse(r.out);
  EXPECT_NEAR(j["relative_entropy"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["trace_distance"].get<double>(), 0.5, 1e-12);
  const auto inf = run("metrics --metric relative-entropy --rho " + data("mixed.json") +
                       " --sigma " + data("ket0.json"));
  EXPECT_EQ(Json::parse(inf.out)["distance"], "+inf");
}

}  // namespace
