#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "specode/io.hpp"
#include "specode/runner.hpp"

using namespace specode;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("specode_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json base_config() {
  return json{{"schema_version", 1},
              {"units", "gamma"},
              {"physical", {{"gamma3N", 5.0}, {"tau", 0.5}}},
              {"code", {{"kind", "linear-h"}, {"n", 4}, {"h", 1.0}}},
              {"mode", "ideal"}};
}

json run_ok(const std::string& cmd, const json& cfg, const fs::path& dir) {
  const RunResult r = run_command(cmd, cfg.dump(), dir);
  EXPECT_EQ(r.exit_code, kExitOk) << r.error;
  return r.summary.empty() ? json{} : json::parse(r.summary);
}

}  // namespace

TEST(Runner, SubcommandList) {
  const auto& s = subcommands();
  for (const char* name : {"jsa", "schmidt", "codes", "single-channel", "sweep", "multi-channel", "validate-layout",
                           "dynamics-check"})
    EXPECT_NE(std::find(s.begin(), s.end(), name), s.end()) << name;
  EXPECT_EQ(run_command("nope", base_config().dump()).exit_code, kExitValidation);
}

TEST(Runner, SingleChannelWritesMatrixAndContrast) {
  const fs::path dir = scratch("single");
  const json s = run_ok("single-channel", base_config(), dir);
  EXPECT_NEAR(s["contrast"]["c_od"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(fs::exists(dir / "g2_matrix.csv"));
  EXPECT_TRUE(fs::exists(dir / "contrast.json"));
  const std::string csv = slurp(dir / "g2_matrix.csv");
  EXPECT_EQ(csv.rfind(std::string("# specode ") + version() + " config_hash=", 0), 0u);
  EXPECT_EQ(s["version"].get<std::string>(), std::string(version()));
}

TEST(Runner, ReciprocalHGivesSameContrast) {
  json a = base_config(), b = base_config();
  a["code"]["h"] = 2.0;
  b["code"]["h"] = 0.5;
  const json ra = run_ok("single-channel", a, scratch("h2"));
  const json rb = run_ok("single-channel", b, scratch("h05"));
  EXPECT_NEAR(ra["contrast"]["c_od"].get<double>(), rb["contrast"]["c_od"].get<double>(), 1e-9);
}

TEST(Runner, RerunsAreByteIdentical) {
  json c = base_config();
  c["code"]["h"] = 1.5;
  const fs::path a = scratch("rerun_a"), b = scratch("rerun_b");
  run_ok("single-channel", c, a);
  run_ok("single-channel", c, b);
  EXPECT_EQ(slurp(a / "g2_matrix.csv"), slurp(b / "g2_matrix.csv"));
  EXPECT_EQ(slurp(a / "contrast.json"), slurp(b / "contrast.json"));
  c["code"]["h"] = 1.75;
  const json other = run_ok("single-channel", c, scratch("rerun_c"));
  EXPECT_NE(other["config_hash"], json::parse(slurp(a / "contrast.json"))["config_hash"]);
}

TEST(Runner, ConfigErrorsExitOne) {
  json c = base_config();
  c["physical"]["gama"] = 1.0;
  RunResult r = run_command("single-channel", c.dump());
  EXPECT_EQ(r.exit_code, kExitValidation);
  EXPECT_NE(r.error.find("config.physical.gama"), std::string::npos) << r.error;

  c = base_config();
  c.erase("units");
  EXPECT_EQ(run_command("single-channel", c.dump()).exit_code, kExitValidation);

  c = base_config();
  c["sweep"] = {{"variable", "h"}, {"values", json::array()}};
  EXPECT_EQ(run_command("sweep", c.dump()).exit_code, kExitValidation);

  EXPECT_EQ(run_command("single-channel", "{ not json").exit_code, kExitValidation);
}

TEST(Runner, NumericModeSurvivesCoarseGridAsExitTwo) {
  json c = base_config();
  c["mode"] = "numeric";
  c["multiplex"] = {{"bin_width", 100.0}};
  c["numeric"] = {{"max_spacing", 5.0}};
  EXPECT_EQ(run_command("single-channel", c.dump()).exit_code, kExitNumeric);
}

TEST(Runner, CodesAndJsaAndSchmidt) {
  json c = base_config();
  c["grid"] = {{"signal", {{"min", -250.0}, {"max", 250.0}, {"points", 512}}},
               {"idler", {{"min", -250.0}, {"max", 250.0}, {"points", 512}}}};
  c["physical"]["tau"] = 0.25;
  c["schmidt"] = {{"n_modes", 4}};
  const fs::path dir = scratch("misc");
  const json codes = run_ok("codes", c, dir);
  EXPECT_EQ(codes["orthogonal_column_pairs"].size(), 6u);
  run_ok("jsa", c, dir);
  EXPECT_TRUE(fs::exists(dir / "jsa.csv"));
  const json s = run_ok("schmidt", c, dir);
  EXPECT_NEAR(s["lambda_sum"].get<double>(), 1.0, 1e-10);
  EXPECT_NEAR(s["entropy"].get<double>(), 0.8726173364847383, 1e-8);
}

TEST(Runner, MultiChannelLevels) {
  json c = base_config();
  c["code"] = {{"kind", "linear-h"}, {"h", 2.0}};
  c["layout"] = {{"r", 2}, {"m", 8}, {"bin_width", 100.0}};
  const fs::path dir = scratch("multi");
  const json s = run_ok("multi-channel", c, dir);
  EXPECT_EQ(s["dimension"], 64);
  EXPECT_EQ(s["matched_level_classes"], 3);
  EXPECT_NEAR(s["contrast"]["c_non"].get<double>(), 1.0 / 3.0, 1e-9);
  EXPECT_TRUE(fs::exists(dir / "g2_matrix.csv"));

  c["layout"] = {{"r", 4}, {"m", 8}, {"bin_width", 100.0}};
  const fs::path big = scratch("multi_big");
  const json t = run_ok("multi-channel", c, big);
  EXPECT_EQ(t["dimension"], 4096);
  c["layout"] = {{"r", 5}, {"m", 8}, {"bin_width", 100.0}};
  const fs::path huge = scratch("multi_huge");
  const json u = run_ok("multi-channel", c, huge);
  EXPECT_FALSE(u["full_matrix_written"].get<bool>());
  EXPECT_FALSE(fs::exists(huge / "g2_matrix.csv"));
  EXPECT_TRUE(fs::exists(huge / "levels.csv"));
}

TEST(Runner, ValidateLayoutReportsCycle) {
  json c = base_config();
  c["layout"] = {{"r", 3}, {"m", 2}, {"cells", {{{0, 0}, {1, 1}}, {{1, 0}, {3, 2}}, {{0, 1}, {2, 3}}}}};
  const RunResult r = run_command("validate-layout", c.dump(), scratch("cycle"));
  EXPECT_EQ(r.exit_code, kExitValidation);
  c["layout"] = {{"r", 2}, {"m", 4}};
  const json ok = run_ok("validate-layout", c, scratch("staircase"));
  EXPECT_EQ(ok["report"]["dof"], 1);
}

TEST(Runner, DynamicsCheck) {
  json c = base_config();
  c["dynamics"] = {{"omega_a_tilde", 0.0}, {"omega_b_tilde", 0.0}};
  const json zero = run_ok("dynamics-check", c, scratch("dyn0"));
  EXPECT_EQ(zero["max_abs_d"].get<double>(), 0.0);
  EXPECT_FALSE(zero["notes"].empty());
  c["dynamics"] = {{"omega_a_tilde", 1.0}, {"omega_b_tilde", 1.0}};
  const fs::path dir = scratch("dyn1");
  const json weak = run_ok("dynamics-check", c, dir);
  EXPECT_GT(weak["max_abs_d"].get<double>(), 0.0);
  EXPECT_TRUE(fs::exists(dir / "dsi.csv"));
}
