#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "facetkit/cli.hpp"

using namespace facetkit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "facetkit_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json without_timing(json j) {
  j.erase("wall_time_s");
  return j;
}

} // namespace

TEST(Cli, BuildVerify) {
  const auto report = scratch("build_report.json");
  const auto r = run({"build", "--pattern", "1,3", "--verify", "--report", report.string()});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto body = body_from_json(json::parse(r.out));
  EXPECT_EQ(body.ambient_dim(), 3);
  const auto rep = json::parse(slurp(report));
  EXPECT_EQ(rep["command"], "build");
  EXPECT_EQ(rep["outputs"]["pattern"], json({0, 1, 3}));
  EXPECT_TRUE(rep["outputs"]["verified"].get<bool>());
  EXPECT_TRUE(rep.contains("wall_time_s"));
}

TEST(Cli, InvalidArguments) {
  EXPECT_EQ(run({"build", "--pattern", "3,2"}).code, cli::kInvalid);
  EXPECT_EQ(run({"frobnicate"}).code, cli::kInvalid);
  EXPECT_EQ(run({}).code, cli::kInvalid);
  EXPECT_EQ(run({"probe", "--body", "/nonexistent.json", "--seed", "1"}).code, cli::kInvalid);
  EXPECT_EQ(run({"probe", "--body", "x.json"}).code, cli::kInvalid);
  EXPECT_EQ(run({"fractal", "--kind", "sierpinski", "--points", "10"}).code, cli::kInvalid);
  EXPECT_EQ(run({"fractal", "--kind", "koch"}).code, cli::kInvalid);
  EXPECT_EQ(run({"lemma-check", "--seed-range", "5..2"}).code, cli::kInvalid);
  EXPECT_EQ(run({"--help"}).code, cli::kOk);
}

TEST(Cli, LemmaCheckRangeIsInclusive) {
  const auto r = run({"lemma-check", "--seed-range", "0..10", "--dim", "3", "--max-vertices", "6"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rep = json::parse(r.out);
  EXPECT_EQ(rep["outputs"]["passes"], 11);
  EXPECT_EQ(rep["outputs"]["failures"], 0);
}

TEST(Cli, ProbeAndCatalog) {
  const auto body = scratch("stadium.json");
  ASSERT_EQ(run({"catalog", "--name", "stadium2d", "--out", body.string(), "--verify"}).code, cli::kOk);
  const auto r = run({"probe", "--body", body.string(), "--samples", "2000", "--seed", "3"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const auto rep = json::parse(r.out);
  EXPECT_EQ(rep["outputs"]["pattern"], json({0, 1, 2}));
  EXPECT_EQ(rep["seed"], 3);
  EXPECT_EQ(rep["outputs"]["unexpected_dims"], json::array());
  const auto listing = run({"catalog"});
  EXPECT_NE(listing.out.find("tetrahedron"), std::string::npos);
}

TEST(Cli, FractalAndBoxdim) {
  const auto pts = scratch("sierpinski.csv");
  ASSERT_EQ(run({"fractal", "--kind", "sierpinski", "--points", "50000", "--seed", "0", "--out", pts.string()}).code,
            cli::kOk);
  const auto r = run({"boxdim", "--in", pts.string(), "--scales", "2..6"});
  ASSERT_EQ(r.code, cli::kOk) << r.err;
  const double slope = json::parse(r.out)["outputs"]["slope"];
  EXPECT_NEAR(slope, 1.585, 0.1);
  const auto gasket = run({"fractal", "--kind", "gasket", "--depth", "3"});
  ASSERT_EQ(gasket.code, cli::kOk);
  EXPECT_EQ(json::parse(gasket.out)["cap_count"], 56);
}

TEST(Cli, ExportMesh) {
  const auto body = scratch("ball3.json");
  const auto obj = scratch("ball3.obj");
  ASSERT_EQ(run({"catalog", "--name", "ball3", "--out", body.string()}).code, cli::kOk);
  ASSERT_EQ(run({"export-mesh", "--body", body.string(), "--resolution", "2", "--out", obj.string()}).code, cli::kOk);
  EXPECT_NE(slurp(obj).find("\nf "), std::string::npos);
  const auto disk = scratch("disk.json");
  ASSERT_EQ(run({"catalog", "--name", "disk", "--out", disk.string()}).code, cli::kOk);
  EXPECT_EQ(run({"export-mesh", "--body", disk.string()}).code, cli::kInvalid);
}

TEST(Cli, Deterministic) {
  const std::vector<std::string> args = {"lemma-check", "--seed-range", "3..5", "--dim", "4", "--max-vertices", "6"};
  EXPECT_EQ(without_timing(json::parse(run(args).out)), without_timing(json::parse(run(args).out)));
  const std::vector<std::string> frac = {"fractal", "--kind", "gasket-residual", "--depth", "4",
                                         "--points", "2000", "--seed", "7"};
  EXPECT_EQ(run(frac).out, run(frac).out);
}
