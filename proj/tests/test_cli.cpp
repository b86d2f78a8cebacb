#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("galpha_cli_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string str() const { return path.string(); }
};

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = galpha::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

double value_after(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size()));
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("integrate writes a trajectory and a manifest") {
  TempDir dir;
  const RunResult r = run({"integrate", "--lambda", "1", "--tau", "0.1", "--t-end", "1", "--out", dir.str()});
  CHECK(r.code == 0);
  const auto rows = lines_of(slurp(dir.path / "trajectory.csv"));
  REQUIRE(rows.size() == 12);
  CHECK(rows.front() == "t,re_u_1,im_u_1");
  CHECK(r.out.find("steps = 10") != std::string::npos);
  CHECK(value_after(r.out, "final error vs exp(-lambda t) = ") < 1e-3);

  const auto manifest = lines_of(slurp(dir.path / "manifest.txt"));
  CHECK(std::is_sorted(manifest.begin(), manifest.end()));
  CHECK(std::find(manifest.begin(), manifest.end(), "p = 3") != manifest.end());
  CHECK(std::find(manifest.begin(), manifest.end(), "command = integrate") != manifest.end());
}

TEST_CASE("integrate on the heat problem") {
  TempDir dir;
  const RunResult r = run({"integrate", "--heat-n", "15", "--kappa", "0.5", "--tau", "0.01",
                           "--t-end", "0.2", "--out", dir.str()});
  CHECK(r.code == 0);
  const auto rows = lines_of(slurp(dir.path / "trajectory.csv"));
  CHECK(rows.size() == 22);
  CHECK(value_after(r.out, "vs semi-discrete solution) = ") < 1e-4);
}

TEST_CASE("a zero operator keeps the solution constant") {
  TempDir dir;
  const RunResult r = run({"integrate", "--p", "2", "--lambda", "0", "--out", dir.str()});
  CHECK(r.code == 0);
  const auto rows = lines_of(slurp(dir.path / "trajectory.csv"));
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].substr(rows[k].find(',')) == ",1,0");
}

TEST_CASE("parameters outside the region produce a warning") {
  TempDir dir;
  const RunResult r = run({"integrate", "--alpha-m", "0.5", "--alpha-f", "0.5", "--out", dir.str()});
  CHECK(r.code == 0);
  CHECK(r.err.find("warning:") != std::string::npos);
  CHECK(r.err.find("outside the unconditional stability region") != std::string::npos);

  const RunResult ok = run({"integrate", "--alpha-m", "1", "--alpha-f", "0.6", "--out", dir.str()});
  CHECK(ok.err.empty());
}

TEST_CASE("invalid configurations exit with code 2") {
  TempDir dir;
  const std::vector<std::vector<std::string>> cases{
      {"integrate", "--alpha-m", "1", "--out", dir.str()},
      {"integrate", "--alpha-m", "1", "--alpha-f", "0.6", "--rho-inf", "0.5", "--out", dir.str()},
      {"integrate", "--variant", "nope", "--out", dir.str()},
      {"integrate", "--variant", "remark1", "--p", "4", "--out", dir.str()},
      {"integrate", "--lambda", "1,x", "--out", dir.str()},
      {"integrate", "--lambda", "1", "--heat-n", "5", "--out", dir.str()},
      {"integrate", "--p", "4", "--rho-inf", "0.5", "--out", dir.str()},
      {"integrate", "--p", "2", "--branch", "alt1", "--out", dir.str()},
      {"integrate", "--rho-inf", "1", "--branch", "alt2", "--out", dir.str()},
      {"integrate", "--p", "12", "--out", dir.str()},
      {"rho-curve", "--n-points", "1", "--out", dir.str()},
      {"stability-map", "--variant", "bogus", "--out", dir.str()},
      {},
  };
  for (const auto& args : cases) {
    const RunResult r = run(args);
    std::string joined;
    for (const auto& a : args) joined += a + ' ';
    CHECK_MESSAGE(r.code == 2, joined);
    CHECK_MESSAGE(r.err.rfind("error: code=", 0) == 0, joined);
  }
}

TEST_CASE("a singular step exits with code 3") {
  TempDir dir;
  // alpha_m + gamma_1 alpha_f lambda tau = 0 for the rho = 1/2 scheme.
  const RunResult r = run({"integrate", "--lambda", "-21.75", "--tau", "0.1", "--out", dir.str()});
  CHECK(r.code == 3);
  CHECK(r.err.find("error: code=StepSingular") != std::string::npos);
}

TEST_CASE("stability map") {
  TempDir dir;
  const RunResult r = run({"stability-map", "--grid", "2", "--out", dir.str()});
  CHECK(r.code == 0);
  const auto rows = lines_of(slurp(dir.path / "stability.csv"));
  CHECK(rows.size() == 5);
  CHECK(rows.front() == "alpha_m,alpha_f,radius,stable");
  CHECK(fs::exists(dir.path / "stability.plot"));
  CHECK(r.out.find("stable cells = ") != std::string::npos);
}

TEST_CASE("stability map output does not depend on the thread count") {
  TempDir a, b;
  CHECK(run({"stability-map", "--grid", "9", "--threads", "1", "--out", a.str()}).code == 0);
  CHECK(run({"stability-map", "--grid", "9", "--threads", "3", "--out", b.str()}).code == 0);
  CHECK(slurp(a.path / "stability.csv") == slurp(b.path / "stability.csv"));
}

TEST_CASE("rho curves") {
  TempDir dir;
  const RunResult r = run({"rho-curve", "--n-points", "2", "--out", dir.str()});
  CHECK(r.code == 0);
  const auto rows = lines_of(slurp(dir.path / "rho_curves.csv"));
  REQUIRE(rows.size() == 9);
  CHECK(fs::exists(dir.path / "rho_curves.plot"));
  bool found = false;
  for (const auto& row : rows) {
    if (row.rfind("alt2,0,", 0) != 0) continue;
    found = true;
    std::istringstream is(row);
    std::string field;
    std::vector<std::string> f;
    while (std::getline(is, field, ',')) f.push_back(field);
    REQUIRE(f.size() >= 4);
    CHECK(std::stod(f[3]) == doctest::Approx(1.911).epsilon(1e-3));
  }
  CHECK(found);
}

TEST_CASE("order check") {
  TempDir dir;
  const RunResult r3 = run({"order-check", "--out", dir.str()});
  CHECK(r3.code == 0);
  const double s3 = value_after(r3.out, "slope = ");
  CHECK(s3 >= 2.9);
  CHECK(s3 <= 3.1);
  CHECK(lines_of(slurp(dir.path / "convergence.csv")).size() == 7);

  const RunResult r2 = run({"order-check", "--p", "2", "--out", dir.str()});
  CHECK(r2.code == 0);
  const double s2 = value_after(r2.out, "slope = ");
  CHECK(s2 >= 1.9);
  CHECK(s2 <= 2.1);

  const RunResult rc = run({"order-check", "--p", "4", "--recover-c", "--out", dir.str()});
  CHECK(rc.code == 0);
  CHECK(value_after(rc.out, "|C - table| = ") <= 1e-8);
  CHECK(rc.out.find("table C(4) = 1/3") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  const RunResult r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("order-check") != std::string::npos);
}

}  // TEST_SUITE
