#include <gtest/gtest.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status;
  std::string out;
};

CliRun run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + LOCSYS_CLI_PATH + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("popen failed");
  std::string out;
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("locsys_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string cache() const { return "--cache-dir " + dir_.string(); }
  fs::path dir_;
};

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(run("field-selftest --q 9 --no-banner").status, 0);
  EXPECT_EQ(run("frobnicate").status, 4);
  EXPECT_EQ(run("hecke --j 6").status, 4);
  EXPECT_EQ(run(cache() + " hecke --j 6 --k 8 --p 4 --compute").status, 4);
  EXPECT_EQ(run(cache() + " census-g1 --q 6 --compute").status, 4);
  EXPECT_EQ(run(cache() + " census-g1 --q 5").status, 3);
  EXPECT_EQ(run(cache() + " census-g1 --q 5 --compute").status, 0);
  EXPECT_EQ(run(cache() + " census-g1 --q 5").status, 0);
  // a wrong eigenvalue cannot give a spin polynomial with roots on the circle
  EXPECT_EQ(run("charpoly --j 6 --k 8 --p 3 --lambda 10000000000 --lambda2 0").status, 2);
  EXPECT_EQ(run("charpoly --j 6 --k 8 --p 3 --lambda -27000 --lambda2 143765361").status, 0);
}

TEST_F(CliTest, JsonSchema) {
  const CliRun r = run(cache() + " --compute --format json mgn --g 2 --n 10 --q 2");
  ASSERT_EQ(r.status, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "mgn");
  EXPECT_EQ(j["inputs"]["g"], 2);
  EXPECT_EQ(j["inputs"]["n"], 10);
  ASSERT_EQ(j["rows"].size(), 1u);
  EXPECT_EQ(j["rows"][0]["count"], "0");
  ASSERT_FALSE(j["checks"].empty());
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c.contains("name") && c.contains("expected") && c.contains("actual") && c.contains("pass"));
  }
}

TEST_F(CliTest, PublishedTables) {
  const CliRun h = run(cache() + " --compute --no-banner hecke --j 6 --k 8 --pmax 7");
  EXPECT_EQ(h.status, 0);
  EXPECT_NE(h.out.find("lambda=-107822000"), std::string::npos);
  EXPECT_NE(h.out.find("PASS 4/4 checks"), std::string::npos);
  const CliRun s = run(cache() + " --compute --no-banner verify-paper --suite s78");
  EXPECT_EQ(s.status, 0);
  EXPECT_NE(s.out.find("PASS 12/12 checks"), std::string::npos);
}

TEST_F(CliTest, ByteStableWithoutBanner) {
  const std::string args = cache() + " --compute --no-banner census-g2 --q 5";
  const CliRun a = run(args), b = run(args);
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const CliRun c = run(cache() + " census-g2 --q 5");
  EXPECT_EQ(c.out.rfind("# locsys-cli census-g2 ", 0), 0u);
  EXPECT_EQ(c.out.substr(c.out.find('\n') + 1), a.out);
}

TEST_F(CliTest, CacheDirectoryPrecedence) {
  const fs::path env_dir = dir_ / "env", flag_dir = dir_ / "flag";
  const std::string env = "LOCSYS_CACHE_DIR=" + env_dir.string();
  EXPECT_EQ(run("--compute census-g1 --q 3", env).status, 0);
  EXPECT_TRUE(fs::exists(env_dir / "g1_q3.txt"));
  EXPECT_EQ(run("--compute --cache-dir " + flag_dir.string() + " census-g1 --q 4", env).status, 0);
  EXPECT_TRUE(fs::exists(flag_dir / "g1_q4.txt"));
  EXPECT_FALSE(fs::exists(env_dir / "g1_q4.txt"));
}

TEST_F(CliTest, FormulaCommands) {
  const CliRun e = run("--no-banner eis --l 11 --m 5");
  EXPECT_EQ(e.status, 0);
  EXPECT_NE(e.out.find("expr=-L^6"), std::string::npos);
  const CliRun g = run(cache() + " --compute --no-banner getzler --n 2 --q 3");
  EXPECT_EQ(g.status, 0);
  EXPECT_NE(g.out.find("expr=L^2  value=9"), std::string::npos);
  const CliRun t = run("--no-banner theta --n1 2 --n2 0 --n3 2 --nu 4");
  EXPECT_NE(t.out.find("re=-92160"), std::string::npos);
  EXPECT_EQ(run("theta --n1 2 --n2 5 --n3 2").status, 4);
}

}  // namespace
