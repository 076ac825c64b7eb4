#include <gtest/gtest.h>

#include <cstdlib>
#include <sys/wait.h>

#include "support.hpp"

using testsupport::TempDir;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args, const TempDir& dir) {
  const auto log = dir / "cli.log";
  const std::string cmd = std::string("\"") + QUARTERSIM_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.output = testsupport::read(log);
  return r;
}

}  // namespace

TEST(Cli, GenerateWritesManifest) {
  TempDir dir("cli_generate");
  const auto config = testsupport::source_dir() / "data/scenarios/distributed-energy.json";
  const auto r = run("generate --config \"" + config.string() + "\" --grid \"" +
                         testsupport::grid_dir("lv-rural1").string() + "\" --out \"" + (dir / "q").string() + "\"",
                     dir);
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "q/manifest.json"));
  EXPECT_NE(r.output.find("seed="), std::string::npos);
}

TEST(Cli, SimulateWithoutQuarterIsUsageError) {
  TempDir dir("cli_usage");
  EXPECT_EQ(run("simulate --out x", dir).code, 2);
}

TEST(Cli, UnknownCommandPrintsUsage) {
  TempDir dir("cli_unknown");
  const auto r = run("frobnicate", dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("Usage"), std::string::npos) << r.output;
}

TEST(Cli, FullPipeline) {
  TempDir dir("cli_pipeline");
  const auto config = testsupport::source_dir() / "data/scenarios/distributed-energy.json";
  const auto q = (dir / "q").string();
  ASSERT_EQ(run("generate --config \"" + config.string() + "\" --grid \"" +
                    testsupport::grid_dir("lv-rural1").string() + "\" --out \"" + q + "\"",
                dir)
                .code,
            0);
  const auto res = (dir / "res").string();
  const auto sim = run("simulate --quarter \"" + q + "\" --hours 6 --out \"" + res + "\"", dir);
  ASSERT_EQ(sim.code, 0) << sim.output;
  const auto rep = run("report --quarter \"" + q + "\" --results \"" + res + "\" --out \"" + (dir / "rep").string() + "\"", dir);
  EXPECT_EQ(rep.code, 0) << rep.output;
  EXPECT_TRUE(std::filesystem::exists(dir / "rep/voltages.csv"));
  const auto bad = run("report --quarter \"" + q + "\" --results \"" + res + "\" --out \"" + (dir / "rep2").string() +
                           "\" --formats pdf",
                       dir);
  EXPECT_EQ(bad.code, 1);
  const auto mo = run("export-model --quarter \"" + q + "\" --out \"" + (dir / "mo").string() + "\"", dir);
  EXPECT_EQ(mo.code, 0) << mo.output;
}
