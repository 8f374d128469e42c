#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "app.hpp"

namespace fs = std::filesystem;
using namespace sobtri;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("sobtri_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::map<std::string, std::string> slurp(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream f(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    out[e.path().filename().string()] = ss.str();
  }
  return out;
}

// Small but complete configs so every command stays quick.
RunConfig quick(const std::string& command, const fs::path& dir) {
  RunConfig c;
  c.set("output=" + dir.string());
  c.set("grid_n=12");
  if (command == "evolve" || command == "norms" || command == "energy") c.set("t_list=0,2");
  if (command == "decay") c.set("t_list=2,4");
  if (command == "residual") c.set("cells=8,16");
  if (command == "eigencheck") c.set("mesh_levels=0,2");
  return c;
}

int run_quiet(const std::string& command, const RunConfig& c, bool svg = false) {
  std::ostringstream out, err;
  return cli::run(command, c, svg, out, err);
}

}  // namespace

class EveryCommand : public ::testing::TestWithParam<std::string> {};

TEST_P(EveryCommand, ByteReproducible) {
  const auto& cmd = GetParam();
  const auto a = scratch(cmd + "_a"), b = scratch(cmd + "_b");
  auto ca = quick(cmd, a), cb = quick(cmd, b);
  ASSERT_EQ(run_quiet(cmd, ca, true), 0);
  ASSERT_EQ(run_quiet(cmd, cb, true), 0);
  auto fa = slurp(a), fb = slurp(b);
  ASSERT_EQ(fa.size(), fb.size());
  ASSERT_TRUE(fa.count("manifest.txt"));
  for (auto& [name, body] : fa) {
    if (name == "manifest.txt") continue;  // differs only in config.output
    EXPECT_EQ(body, fb[name]) << name;
  }
  // manifest lists a checksum for every CSV, and the checksums match
  const auto& m = fa["manifest.txt"];
  for (const auto& [name, body] : fa) {
    if (name.size() < 4 || name.substr(name.size() - 4) != ".csv") continue;
    EXPECT_NE(m.find("sha256." + name + "=" + cli::sha256_hex(body)), std::string::npos) << name;
  }
  EXPECT_NE(m.find("command=" + cmd + "\n"), std::string::npos);
  EXPECT_NE(m.find("config.alpha=1\n"), std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

INSTANTIATE_TEST_SUITE_P(Cli, EveryCommand, ::testing::ValuesIn(cli::commands()));

TEST(Cli, ManifestIdenticalInSameDirectory) {
  const auto d = scratch("same");
  const auto c = quick("field", d);
  ASSERT_EQ(run_quiet("field", c), 0);
  const auto first = slurp(d);
  ASSERT_EQ(run_quiet("field", c), 0);
  EXPECT_EQ(first, slurp(d));
  fs::remove_all(d);
}

TEST(Cli, FieldFixtureValue) {
  const auto d = scratch("fixture");
  RunConfig c;
  c.set("output=" + d.string());
  ASSERT_EQ(run_quiet("field", c), 0);
  std::ifstream f(d / "field.csv");
  std::string line;
  std::getline(f, line);
  EXPECT_EQ(line, "x,y,u");
  double best = 1e9, u_best = 0;
  while (std::getline(f, line)) {
    double x, y, u;
    char c1, c2;
    std::istringstream ss(line);
    ss >> x >> c1 >> y >> c2 >> u;
    const double r = std::hypot(x - 0.8, y - 0.2);
    if (r < best) best = r, u_best = u;
  }
  EXPECT_NEAR(u_best, -0.10, 1e-12);
  fs::remove_all(d);
}

TEST(Cli, EigencheckAligned) {
  const auto d = scratch("eig");
  auto c = quick("eigencheck", d);
  std::ostringstream out, err;
  ASSERT_EQ(cli::run("eigencheck", c, false, out, err), 0);
  std::istringstream rows(out.str());
  std::string line;
  int n = 0;
  while (std::getline(rows, line)) {
    double h, r, e;
    char c1, c2;
    std::istringstream ss(line);
    ss >> h >> c1 >> r >> c2 >> e;
    EXPECT_NEAR(r, 0.2, 1e-10);
    EXPECT_LE(e, 1e-8);
    ++n;
  }
  EXPECT_EQ(n, 2);
  EXPECT_TRUE(fs::exists(d / "mesh_nodes.csv"));
  fs::remove_all(d);
}

TEST(Cli, ExitCodes) {
  const auto d = scratch("codes");
  RunConfig c;
  c.set("output=" + d.string());
  EXPECT_EQ(run_quiet("nosuch", c), cli::kExitConfig);

  auto bad = c;
  bad.set("lambda=0.5");  // threshold for alpha = 1
  EXPECT_EQ(run_quiet("field", bad), cli::kExitConfig);

  auto none = c;
  none.set("window0_u=none");
  EXPECT_EQ(run_quiet("evolve", none), cli::kExitConfig);

  auto budget = c;
  budget.set("t_list=1e6");
  EXPECT_EQ(run_quiet("evolve", budget), cli::kExitBudget);

  // output path below a regular file
  fs::create_directories(d);
  std::ofstream(d / "file") << "x";
  auto io = c;
  io.set("output=" + (d / "file" / "sub").string());
  EXPECT_EQ(run_quiet("billiard", io), cli::kExitIo);
  fs::remove_all(d);
}

TEST(Cli, FailedRunWritesNothing) {
  const auto d = scratch("nothing");
  RunConfig c;
  c.set("output=" + d.string());
  c.set("t_list=1e6");
  EXPECT_EQ(run_quiet("evolve", c), cli::kExitBudget);
  EXPECT_FALSE(fs::exists(d));
}
