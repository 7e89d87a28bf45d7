#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

namespace {

struct CliRun {
  int exit_code = -1;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + ALPHA_SELFACTION_BIN + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("alpha_selfaction_cli_" + name);
}

TEST(Cli, CheckCoefficientsMatchesEverything) {
  const CliRun r = run("check-coefficients --order 2 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["all_matched"].get<bool>());
  EXPECT_GE(j["checks"].size(), 7u);
}

TEST(Cli, AlphaClosedFormRoot) {
  const CliRun r = run("alpha --mode eq64 --bracket 0.005 0.01 --format json");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["alpha"].get<double>(), 0.007292, 1e-5);
  EXPECT_EQ(j["mode"], "eq64_closed");
  EXPECT_NEAR(j["omega1_term"].get<double>() + j["omega2_term"].get<double>() - j["lambda_term"].get<double>(),
              j["residual"].get<double>(), 1e-9);
}

TEST(Cli, Fig1RowCount) {
  const auto path = temp_path("fig1.csv");
  const CliRun r = run("fig1 --alpha 0.0072976 --samples 512 --out " + path.string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_TRUE(r.out.empty());
  std::istringstream in(slurp(path));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "s,F,G,f,g,Gg,Ff");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 512);
  std::filesystem::remove(path);
}

TEST(Cli, EverySubcommandWritesJsonToFile) {
  for (const std::string sub : {"series", "check-coefficients", "products", "densities", "moments", "beta", "alpha",
                                "refine", "fig1", "verify"}) {
    const auto path = temp_path(sub + ".json");
    const CliRun r = run(sub + " --format json --out " + path.string());
    EXPECT_TRUE(r.exit_code == 0 || r.exit_code == 1) << sub;
    EXPECT_TRUE(nlohmann::json::accept(slurp(path))) << sub;
    std::filesystem::remove(path);
  }
}

TEST(Cli, TextAndCsvFormats) {
  const CliRun text = run("refine --order 2 --format text");
  ASSERT_EQ(text.exit_code, 0);
  EXPECT_NE(text.out.find("final alpha"), std::string::npos);
  const CliRun csv = run("refine --order 2");
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "order,mode,alpha,beta,difference,ratio,iterations");
  const CliRun moments = run("moments");
  EXPECT_EQ(moments.out.substr(0, moments.out.find('\n')), "p,q,eta,exact,quadrature,paper_approximation,abs_diff");
}

TEST(Cli, OutputIsDeterministicAcrossRunsAndThreads) {
  for (const std::string args : {"refine --order 2", "fig1 --samples 300", "moments", "beta --format json",
                                 "densities --format json"}) {
    const CliRun a = run(args + " --threads 1");
    const CliRun b = run(args + " --threads 4");
    const CliRun c = run(args, "ALPHA_SELFACTION_THREADS=3");
    EXPECT_EQ(a.out, b.out) << args;
    EXPECT_EQ(a.out, c.out) << args;
    EXPECT_FALSE(a.out.empty()) << args;
  }
}

TEST(Cli, VerifyExitCodeFollowsVerdict) {
  const CliRun r = run("verify --format json");
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["criteria"].size(), 9u);
  EXPECT_EQ(r.exit_code, j["all_passed"].get<bool>() ? 0 : 1);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("").exit_code, 2);
  EXPECT_EQ(run("alpha --format xml").exit_code, 2);
  EXPECT_EQ(run("alpha --no-such-flag").exit_code, 2);
  EXPECT_EQ(run("alpha --bracket 0.01 0.005").exit_code, 2);
  EXPECT_EQ(run("alpha --mode sideways").exit_code, 2);
  EXPECT_EQ(run("fig1 --samples 1").exit_code, 2);
  EXPECT_EQ(run("refine --order 0").exit_code, 2);
  EXPECT_EQ(run("beta --alpha 0.5").exit_code, 2);
}

}  // namespace
