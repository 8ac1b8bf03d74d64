#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

namespace {

struct RunResult {
  int code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(HYPSUM_CLI_PATH) + " " + args + " 2>&1";
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe)
    return r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0)
    r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Drops the trailing wall_time column of a table report.
std::string strip_timing(const std::string& table) {
  std::istringstream in(table);
  std::string line, out;
  while (std::getline(in, line))
    out += line.substr(0, line.rfind(',')) + '\n';
  return out;
}

std::filesystem::path temp_dir() {
  auto dir = std::filesystem::temp_directory_path() / ("hypsum_cli_test_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  return dir;
}

TEST(Eval, Theorem1Value) {
  const auto r = run("eval --method theorem1 --c 0.5 --d 3 --n 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("value=1.12148922218710"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("err_est="), std::string::npos);
  EXPECT_NE(r.out.find("terms_used="), std::string::npos);
  EXPECT_NE(r.out.find("method=theorem1"), std::string::npos);
}

TEST(Eval, SeriesTrivial) {
  const auto r = run("eval --method series --c 0 --d 2.7 --n 0");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("value=1+0i"), std::string::npos) << r.out;
}

TEST(Eval, ComplexArguments) {
  const auto a = run("eval --method theorem1 --c 0.5+1.25i --d 3-0.5i --n 2");
  const auto b = run("eval --method series --c 0.5+1.25i --d 3-0.5i --n 2");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(b.code, 0);
}

TEST(Eval, RemovableSingularityPolicy) {
  const auto strict = run("eval --method theorem1 --c 1 --d 3 --n 0");
  EXPECT_EQ(strict.code, 2);
  const auto eps = run("eval --method theorem1 --c 1 --d 3 --n 0 --limit-mode epsilon");
  EXPECT_EQ(eps.code, 0) << eps.out;
}

TEST(Eval, DomainViolationNamesPredicate) {
  const auto r = run("eval --method theorem1 --c 2 --d 1 --n 0");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("Re(d-c+n) <= 0"), std::string::npos) << r.out;
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 1);
}

TEST(Eval, ConfigErrors) {
  EXPECT_EQ(run("eval --method theorem1 --c 1+ --d 3").code, 2);
  EXPECT_EQ(run("eval --method nonsense").code, 2);
  EXPECT_EQ(run("eval --method theorem1 --limit-mode sideways").code, 2);
  EXPECT_EQ(run("eval --method theorem1 --unknown-flag 3").code, 2);
  EXPECT_EQ(run("eval --method series --rel-tol 0").code, 2);
  EXPECT_EQ(run("").code, 2);
}

TEST(Eval, OtherMethods) {
  EXPECT_EQ(run("eval --method special --c 0.5 --d 3 --n 1").code, 0);
  EXPECT_EQ(run("eval --method miller-paris --a 0.3 --c 0.7 --d 2.5 --m 1 --p 2").code, 0);
  EXPECT_EQ(run("eval --method eq24 --mu 0.5 --nu 0 --n 0").code, 0);
  EXPECT_EQ(run("eval --method delta --mu 0.5 --nu 0.5 --n 1 --chi 0.5").code, 0);
  EXPECT_EQ(run("eval --method expansion --mu 0 --nu 0 --n 0 --a 2 --b 1").code, 0);
  EXPECT_EQ(run("eval --method s-direct --mu 0 --nu 0 --n 0 --a 1 --terms 2000").code, 0);
  EXPECT_EQ(run("eval --method expansion --mu 0 --nu 0 --n 0 --a 4").code, 2);
}

TEST(Verify, DeterministicReports) {
  const auto dir = temp_dir();
  const auto a = run("verify --suite all --seed 42 --samples 10 --bessel-terms 20000 --out " +
                     (dir / "a.csv").string());
  const auto b = run("verify --suite all --seed 42 --samples 10 --bessel-terms 20000 --threads 3 --out " +
                     (dir / "b.csv").string());
  EXPECT_EQ(a.code, 0) << a.out;
  EXPECT_EQ(b.code, 0) << b.out;
  EXPECT_NE(a.out.find("failed=0"), std::string::npos);
  EXPECT_EQ(strip_timing(read_file(dir / "a.csv")), strip_timing(read_file(dir / "b.csv")));
  std::filesystem::remove_all(dir);
}

TEST(Verify, ObjectsFormatAndEnvironmentDirectory) {
  const auto dir = temp_dir();
  const std::string env = "HYPSUM_REPORT_DIR=" + dir.string() + " ";
  const std::string cmd = "env " + env + HYPSUM_CLI_PATH +
                          " verify --suite theorem1 --samples 5 --format objects 2>&1";
  EXPECT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(std::filesystem::exists(dir / "hypsum_theorem1_seed42.jsonl"));
  std::filesystem::remove_all(dir);
}

TEST(Verify, FailureExitCode) {
  const auto dir = temp_dir();
  const auto r = run("verify --suite theorem1 --samples 5 --tolerance 1e-300 --out " +
                     (dir / "f.csv").string());
  EXPECT_EQ(r.code, 1) << r.out;
  std::filesystem::remove_all(dir);
}

TEST(Verify, ConfigAndIoExitCodes) {
  EXPECT_EQ(run("verify --suite nope").code, 2);
  EXPECT_EQ(run("verify --samples 0").code, 2);
  EXPECT_EQ(run("verify --format xml").code, 2);
  EXPECT_EQ(run("verify --suite theorem1 --samples 2 --out /nonexistent-dir/x/r.csv").code, 3);
}

} // namespace
