#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef VIEWSEL_CLI_PATH
#error "VIEWSEL_CLI_PATH must be defined"
#endif
#ifndef VIEWSEL_FIXTURE_DIR
#error "VIEWSEL_FIXTURE_DIR must be defined"
#endif

namespace {

namespace fs = std::filesystem;

std::string fixture(const char* name) { return std::string(VIEWSEL_FIXTURE_DIR) + "/" + name; }

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("viewsel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string command = std::string(VIEWSEL_CLI_PATH) + " " + args + " 2>" + (dir_ / "stderr").string();
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }

  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, WritesReportAndDdl) {
  const int code = run("--workload " + fixture("sales_workload.sql") + " --stats " + fixture("sales_stats.json") +
                       " --report " + path("r.json") + " --output-ddl " + path("v.sql") + " --trace " +
                       path("t.txt"));
  ASSERT_EQ(code, 0) << slurp(dir_ / "stderr");
  EXPECT_NE(slurp(path("r.json")).find("\"covering_rate\": 1"), std::string::npos) << slurp(path("r.json"));
  EXPECT_EQ(slurp(path("v.sql")).rfind("create materialized view mv_1 as select", 0), 0u);
  EXPECT_FALSE(slurp(dir_ / "stderr").empty());
}

TEST_F(CliTest, ByteIdenticalReruns) {
  const std::string common = "--workload " + fixture("sales_workload.sql") + " --stats " +
                             fixture("sales_stats.json") + " --objective hybrid --budget 50000 --seed 7";
  ASSERT_EQ(run(common + " --report " + path("a.json") + " --output-ddl " + path("a.sql")), 0);
  ASSERT_EQ(run(common + " --report " + path("b.json") + " --output-ddl " + path("b.sql")), 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.sql")), slurp(path("b.sql")));
}

TEST_F(CliTest, InputErrorsExitWithOne) {
  {
    std::ofstream(path("empty.sql")) << "-- no statements\n";
  }
  EXPECT_EQ(run("--workload " + path("empty.sql") + " --stats " + fixture("sales_stats.json")), 1);
  EXPECT_NE(slurp(dir_ / "stderr").find("parse"), std::string::npos);
  EXPECT_EQ(run("--workload /nonexistent.sql --stats " + fixture("sales_stats.json")), 1);
  EXPECT_EQ(run("--workload " + fixture("sales_workload.sql") + " --stats " + fixture("sales_stats.json") +
                " --objective ratio"),
            1);
  EXPECT_EQ(run("--workload " + fixture("sales_workload.sql") + " --stats " + fixture("sales_stats.json") +
                " --objective best"),
            1);
  EXPECT_EQ(run("--stats " + fixture("sales_stats.json")), 1);
}

TEST_F(CliTest, ReportOnStdoutByDefault) {
  const std::string command = std::string(VIEWSEL_CLI_PATH) + " --workload " + fixture("sales_workload.sql") +
                              " --stats " + fixture("sales_stats.json") + " >" + path("out.json") + " 2>/dev/null";
  ASSERT_EQ(std::system(command.c_str()), 0);
  EXPECT_EQ(slurp(path("out.json")).front(), '{');
}

}  // namespace
