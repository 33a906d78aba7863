#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bhlab/cli.hpp"
#include "bhlab/report.hpp"
#include "json.hpp"

namespace bhlab {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bhlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& row) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(row);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!row.empty() && row.back() == ',') out.emplace_back();
  return out;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("bhlab_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& content) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

  std::string k4_spec() {
    return write("k4.json", R"({"k":4,"t":2,"r":1,"w":3,"m":[4,4,6,8],"f":{"name":"partialmod","s":1}})");
  }

  fs::path dir_;
};

TEST_F(CliTest, GenInputIsReproducibleAndValid) {
  const std::string spec = k4_spec();
  const Result a = cli({"gen-input", "--spec", spec, "--seed", "7"});
  const Result b = cli({"gen-input", "--spec", spec, "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.size(), 4u + 4 + 4 + 6 + 8 + 1);
  EXPECT_EQ(a.out[0], '2');
  const Result pinned = cli({"gen-input", "--spec", spec, "--seed", "7", "--v", "2"});
  std::size_t ones = 0;
  for (char ch : pinned.out) ones += ch == '1';
  EXPECT_EQ(ones, 4u * 4);
}

TEST_F(CliTest, RunQalgAIsOptimal) {
  const Result r = cli({"run", "--spec", k4_spec(), "--alg", "qalg-a", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["cost"].get<double>(), 2.0);
  EXPECT_EQ(j["ratio"].get<double>(), 1.0);
  EXPECT_EQ(j["outputs"].get<std::string>().size(), 4u);
}

TEST_F(CliTest, RunIsByteIdentical) {
  const std::string spec = k4_spec();
  const Result a = cli({"run", "--spec", spec, "--alg", "qalg-b", "--seed", "7"});
  const Result b = cli({"run", "--spec", spec, "--alg", "qalg-b", "--seed", "7"});
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, SeedFromEnvironmentAndExperimentStanza) {
  const std::string spec = k4_spec();
  const Result flag = cli({"run", "--spec", spec, "--alg", "ralg-a", "--eps", "0.3", "--seed", "11"});
  ::setenv("BHLAB_SEED", "11", 1);
  const Result env = cli({"run", "--spec", spec, "--alg", "ralg-a", "--eps", "0.3"});
  ::unsetenv("BHLAB_SEED");
  EXPECT_EQ(flag.out, env.out);

  const std::string with_stanza = write(
      "exp.json",
      R"({"k":4,"t":2,"r":1,"w":3,"m":[4,4,6,8],"f":{"name":"partialmod","s":1},)"
      R"("experiment":{"alg":"ralg-a","eps":0.3,"seed":11}})");
  const Result stanza = cli({"run", "--spec", with_stanza});
  ASSERT_EQ(stanza.code, 0) << stanza.err;
  EXPECT_EQ(nlohmann::json::parse(stanza.out)["outputs"], nlohmann::json::parse(flag.out)["outputs"]);
  // Flags win over the stanza.
  const Result overridden = cli({"run", "--spec", with_stanza, "--alg", "qalg-a"});
  EXPECT_EQ(nlohmann::json::parse(overridden.out)["alg"], "qalg-a");
}

TEST_F(CliTest, ExitCodes) {
  const std::string spec = k4_spec();
  EXPECT_EQ(cli({"run", "--spec", spec, "--alg", "ibh"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--spec", spec, "--alg", "nope"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--spec", (dir_ / "missing.json").string(), "--alg", "qalg-a"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--spec", write("bad.json", "{not json")}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--spec", spec, "--alg", "qalg-a", "--input", "0211"}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"run", "--spec", spec, "--alg", "qalg-a", "--input", "21110211112111111211110000"}).code,
            kExitPromise);
  EXPECT_EQ(cli({"expect", "--spec", spec, "--alg", "qalg-b", "--method", "mc", "--trials", "0"}).code, kExitUsage);
  EXPECT_EQ(cli({"expect", "--spec", spec, "--alg", "ralg-a", "--eps", "0.2", "--branch-limit", "3"}).code,
            kExitBranchLimit);
  EXPECT_EQ(cli({"brute", "--spec", spec, "--states", "5"}).code, kExitSearchSpace);
}

TEST_F(CliTest, ExpectClosedAtZeroNoise) {
  const Result r = cli({"expect", "--spec", k4_spec(), "--alg", "ralg-a", "--method", "closed", "--eps", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], kExpectationCsvHeader);
  const auto f = fields(rows[1]);
  ASSERT_EQ(f.size(), 9u);
  EXPECT_EQ(f[1], "closed");
  EXPECT_EQ(std::stod(f[4]), 2.0);
}

TEST_F(CliTest, ExpectAllMethodsAgree) {
  const Result r =
      cli({"expect", "--spec", k4_spec(), "--alg", "ralg-a", "--method", "all", "--eps", "0.1", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const auto closed = fields(rows[1]);
  const auto exact = fields(rows[2]);
  const auto mc = fields(rows[3]);
  EXPECT_EQ(closed[1], "closed");
  EXPECT_EQ(exact[1], "exact");
  EXPECT_EQ(mc[1], "mc");
  EXPECT_NEAR(std::stod(closed[4]), 2.724, 1e-9);
  EXPECT_NEAR(std::stod(exact[4]), std::stod(closed[4]), 1e-9);
  EXPECT_EQ(exact[8], "8");
  EXPECT_LE(std::abs(std::stod(mc[4]) - 2.724), 4 * std::stod(mc[5]));
  EXPECT_EQ(mc[6], "100000");
  EXPECT_EQ(mc[7], "5");
  EXPECT_EQ(mc[3], "1");
}

TEST_F(CliTest, ExpectIsIndependentOfJobs) {
  const std::string spec = k4_spec();
  const Result one = cli({"expect", "--spec", spec, "--alg", "qalg-b", "--method", "mc", "--trials", "20000", "--jobs", "1"});
  const Result four =
      cli({"expect", "--spec", spec, "--alg", "qalg-b", "--method", "mc", "--trials", "20000", "--jobs", "4"});
  ASSERT_EQ(one.code, 0);
  EXPECT_EQ(one.out, four.out);
}

TEST_F(CliTest, SweepEps) {
  const Result r = cli({"sweep", "--spec", k4_spec(), "--alg", "ralg-a", "--axis", "eps", "--from", "0", "--to",
                        "0.45", "--step", "0.05"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 11u);
  EXPECT_EQ(rows[0], "axis,x,spec_id,alg,method,value,ratio,det_bound,rand_bound,status,reason");
  double previous = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.size(), 11u);
    EXPECT_EQ(f[9], "ok");
    const double ratio = std::stod(f[6]);
    EXPECT_GE(ratio, previous - 1e-12);
    previous = ratio;
  }
  EXPECT_EQ(std::stod(fields(rows[1])[6]), 1.0);
}

TEST_F(CliTest, SweepAdviceBoundsEndAtOne) {
  const Result r = cli({"sweep", "--spec", k4_spec(), "--alg", "qalg-a", "--axis", "b", "--from", "0", "--to", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 6u);
  const auto first = fields(rows[1]);
  EXPECT_EQ(std::stod(first[7]), 3.0);
  EXPECT_EQ(std::stod(first[8]), 2.5);
  const auto last = fields(rows.back());
  EXPECT_EQ(std::stod(last[7]), 1.0);
  EXPECT_EQ(std::stod(last[8]), 1.0);
}

TEST_F(CliTest, SweepRejectsNonDivisors) {
  const Result r = cli({"sweep", "--spec", k4_spec(), "--alg", "qalg-b", "--axis", "t", "--from", "1", "--to", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = lines(r.out);
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(fields(rows[1])[9], "ok");
  EXPECT_EQ(fields(rows[2])[9], "ok");
  const auto rejected = fields(rows[3]);
  EXPECT_EQ(rejected[1], "3");
  EXPECT_EQ(rejected[9], "rejected");
  EXPECT_EQ(rejected[10], "k mod t != 0");
  EXPECT_EQ(fields(rows[4])[9], "ok");
  EXPECT_EQ(cli({"sweep", "--spec", k4_spec(), "--alg", "qalg-b", "--axis", "t", "--from", "3", "--to", "1"}).code,
            kExitUsage);
  EXPECT_EQ(cli({"sweep", "--spec", k4_spec(), "--alg", "qalg-b", "--axis", "m", "--from", "1", "--to", "2"}).code,
            kExitUsage);
}

TEST_F(CliTest, SweepWritesCsvAndSvg) {
  const fs::path out = dir_ / "plots";
  const Result r = cli({"sweep", "--spec", k4_spec(), "--alg", "ralg-a", "--axis", "eps", "--from", "0", "--to", "0.4",
                        "--step", "0.1", "--out", out.string(), "--svg", "--method", "closed"});
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_TRUE(fs::exists(out / "sweep_eps.csv"));
  ASSERT_TRUE(fs::exists(out / "sweep_eps.svg"));
  std::ifstream svg(out / "sweep_eps.svg");
  std::stringstream text;
  text << svg.rdbuf();
  EXPECT_NE(text.str().find("<svg"), std::string::npos);
  EXPECT_NE(text.str().find("</svg>"), std::string::npos);
}

TEST_F(CliTest, BruteReportsWitness) {
  const std::string pm = write("pm.json", R"({"k":2,"t":1,"r":1,"w":3,"m":[8,8],"f":{"name":"partialmod","s":1}})");
  const Result r = cli({"brute", "--spec", pm, "--states", "2", "--b", "0", "--jobs", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GE(j["ratio"].get<double>(), 3.0);
  EXPECT_EQ(j["det_bound"].get<double>(), 3.0);
  EXPECT_EQ(j["witness"].size(), 1u);
  EXPECT_NE(r.err.find("elapsed_ms="), std::string::npos);
  EXPECT_FALSE(j.contains("elapsed_ms"));

  const std::string tiny = write("tiny.json", R"({"k":2,"t":2,"r":1,"w":3,"m":[8,8],"f":{"name":"partialmod","s":1}})");
  const Result advised = cli({"brute", "--spec", tiny, "--b", "1"});
  ASSERT_EQ(advised.code, 0) << advised.err;
  const auto a = nlohmann::json::parse(advised.out);
  EXPECT_GE(a["ratio"].get<double>(), 2.0);
  EXPECT_EQ(a["witness"].size(), 2u);
  EXPECT_TRUE(a.contains("partition"));
}

TEST_F(CliTest, TableAlgorithmFromFile) {
  const std::string table =
      write("zero.json", R"({"S":1,"transitions":[[0,0,0]],"outputs":[[0,0,0]]})");
  const Result r = cli({"run", "--spec", k4_spec(), "--alg", "table:" + table});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["outputs"], "0000");
  const std::string broken = write("broken.json", R"({"S":1,"transitions":[[0,0]],"outputs":[[0,0,0]]})");
  EXPECT_EQ(cli({"run", "--spec", k4_spec(), "--alg", "table:" + broken}).code, kExitUsage);
}

TEST_F(CliTest, BinaryMatchesInProcess) {
  const std::string spec = k4_spec();
  const fs::path out = dir_ / "out.json";
  const std::string command = std::string(BHLAB_CLI_PATH) + " run --spec " + spec +
                              " --alg qalg-b --seed 7 > " + out.string();
  ASSERT_EQ(std::system(command.c_str()), 0);
  std::ifstream in(out);
  std::stringstream text;
  text << in.rdbuf();
  EXPECT_EQ(text.str(), cli({"run", "--spec", spec, "--alg", "qalg-b", "--seed", "7"}).out);

  const std::string failing = std::string(BHLAB_CLI_PATH) + " brute --spec " + spec + " --states 5 2>/dev/null";
  const int status = std::system(failing.c_str());
  EXPECT_EQ(WEXITSTATUS(status), kExitSearchSpace);
}

}  // namespace
}  // namespace bhlab
