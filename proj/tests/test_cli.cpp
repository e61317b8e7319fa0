#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli_app.hpp"

using namespace orbispec;

namespace {

struct Result {
  int code = -1;
  std::string out, err;
  json report() const { return json::parse(out); }
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "orbispec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / ("orbispec_test_" + name);
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST(Cli, SpectrumOfQuotient) {
  const auto r = run_cli({"spectrum", "--model", "s2-mod-3", "--lambda-max", "110"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.report();
  EXPECT_EQ(j["version"], ORBISPEC_VERSION);
  EXPECT_EQ(j["config"]["model"], "s2-mod-3");
  const auto ev = j["result"]["eigenvalues"];
  EXPECT_EQ(ev[0], json::array({0.0, 1}));
  EXPECT_EQ(ev[1], json::array({2.0, 1}));
  EXPECT_EQ(ev[2], json::array({6.0, 1}));
}

TEST(Cli, EigBall) {
  const auto r = run_cli({"eig-ball", "--n", "2", "--kappa", "0", "--r", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["lambda_5dp"], "5.78319");
}

TEST(Cli, RoundTripMatchesLibrary) {
  const auto spec = model_spectrum(find_model(model_catalog(), "pillowcase"), 4.0 * kPi * kPi * 400.0);
  const auto path = temp_file("pillow.json", to_json(spec).dump());

  const auto w = run_cli({"weyl", "--input", path});
  ASSERT_EQ(w.code, 0) << w.err;
  EXPECT_EQ(w.report()["result"], to_json(weyl_fit(spec)));

  const auto s = run_cli({"singular", "--input", path, "--kappa", "0"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(s.report()["result"], to_json(main_theorem_2(spec, 0.0)));

  const auto d = run_cli({"diameter", "--input", path, "--kappa", "0", "--r-grid", "0.2,0.3,0.39"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(d.report()["result"]["diameter_bound"], best_diameter_bound(spec, 0.0, 2, {0.2, 0.3, 0.39}).diameter);
}

TEST(Cli, ReportFileViaOut) {
  const auto out = (std::filesystem::temp_directory_path() / "orbispec_test_out.json").string();
  const auto r = run_cli({"constants", "--n", "2", "--kappa", "1", "--diameter", "3.141592653589793", "--volume", "4.18879",
                          "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto j = read_json_file(out);
  EXPECT_GE(j["result"]["singular_cap"].get<int>(), 2);
}

TEST(Cli, MalformedJsonExitsOne) {
  const auto path = temp_file("broken.json", "{\"truncation\": 3, \"eigenvalues\": [[0, 1],");
  EXPECT_EQ(run_cli({"weyl", "--input", path}).code, 1);
  const auto missing = temp_file("missing.json", "{\"eigenvalues\": [[0, 1]]}");
  EXPECT_EQ(run_cli({"weyl", "--input", missing}).code, 1);
}

TEST(Cli, CertificationFailureExitsTwo) {
  const auto spec = sphere_spectrum(2, 2.5);
  const auto path = temp_file("short.json", to_json(spec).dump());
  const auto r = run_cli({"singular", "--input", path, "--kappa", "0", "--n", "2", "--volume", "1"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("diameter"), std::string::npos) << r.err;
}

TEST(Cli, UnknownModelExitsTwo) {
  EXPECT_EQ(run_cli({"spectrum", "--model", "klein", "--lambda-max", "10"}).code, 2);
  EXPECT_EQ(run_cli({"no-such-command"}).code, 2);
}

TEST(Cli, NetOnModelIsDeterministic) {
  const auto a = run_cli({"net", "--model", "s2-mod-3", "--points", "120", "--seed", "5"});
  const auto b = run_cli({"net", "--model", "s2-mod-3", "--points", "120", "--seed", "5"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = a.report()["result"];
  EXPECT_TRUE(j["verified"].get<bool>());
  EXPECT_LE(j["net_size"].get<int>(), j["packing_bound"].get<int>());
}

TEST(Cli, NetFromPointCloud) {
  const auto path = temp_file("cloud.json", R"({"points": 3, "dist": [[0,1,2],[1,0,1],[2,1,0]]})");
  const auto r = run_cli({"net", "--input", path, "--n", "2", "--diameter", "2", "--eps", "1.1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["net"], json::array({0, 2}));
}

TEST(Cli, ActionFileSpectrum) {
  const auto path = temp_file("action.json", R"({"type": "matrix", "generators": [[[-1,0,0],[0,-1,0],[0,0,1]]]})");
  const auto r = run_cli({"spectrum", "--action", path, "--n", "2", "--lambda-max", "6"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["result"]["eigenvalues"], json::parse("[[0.0,1],[2.0,1],[6.0,3]]"));
}

TEST(Cli, VerifySweep) {
  const auto r = run_cli({"verify"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = r.report()["result"];
  EXPECT_TRUE(j["all_sound"].get<bool>());
  EXPECT_EQ(j["models"].size(), model_catalog().size());
  EXPECT_NE(r.err.find("pillowcase"), std::string::npos);
}
