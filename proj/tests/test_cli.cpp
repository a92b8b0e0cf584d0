#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int run_tool(const std::string& args, const std::string& stderr_file = "") {
  std::string cmd = std::string(FRACELAST_BIN) + " " + args;
  if (!stderr_file.empty()) cmd += " 2>" + stderr_file;
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::path("cli_scratch") / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
};

// rows of a numeric csv, skipping '#' comments and the header
std::vector<std::vector<double>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<double>> rows;
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;
      continue;
    }
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(std::move(row));
  }
  return rows;
}

const std::string classical_green = R"({
  "terms": [{"alpha": 2.0, "c": 1.0}],
  "r_min": 0.5, "r_max": 2.0, "r_count": 4
})";

}  // namespace

TEST_CASE("green: classical values, header, sidecar") {
  TempDir dir("green");
  write_file(dir.path / "cfg.json", classical_green);
  const int rc = run_tool("green --config " + (dir.path / "cfg.json").string() +
                          " --out " + dir.path.string());
  REQUIRE(rc == 0);

  const std::string csv = read_file(dir.path / "green.csv");
  CHECK(csv.rfind("# fracelast ", 0) == 0);
  CHECK(csv.find("config=") != std::string::npos);
  CHECK(csv.find("r,u,remainder_estimate") != std::string::npos);

  const auto rows = read_csv(dir.path / "green.csv");
  REQUIRE(rows.size() == 4);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 3);
    const double expect = 1.0 / (4.0 * M_PI * row[0]);
    CHECK(row[1] == doctest::Approx(expect).epsilon(1e-6));
  }
  CHECK(fs::exists(dir.path / "green.json"));
}

TEST_CASE("identical config produces byte-identical output") {
  TempDir a("det_a"), b("det_b");
  write_file(a.path / "cfg.json", classical_green);
  write_file(b.path / "cfg.json", classical_green);
  REQUIRE(run_tool("green --config " + (a.path / "cfg.json").string() + " --out " +
                   a.path.string()) == 0);
  REQUIRE(run_tool("green --config " + (b.path / "cfg.json").string() + " --out " +
                   b.path.string()) == 0);
  CHECK(read_file(a.path / "green.csv") == read_file(b.path / "green.csv"));
  CHECK(read_file(a.path / "green.json") == read_file(b.path / "green.json"));
}

TEST_CASE("validation failure: exit 2 with a machine-readable error") {
  TempDir dir("bad");
  write_file(dir.path / "cfg.json", R"({"r_min": 0.5, "r_max": 2.0})");
  const fs::path err = dir.path / "stderr.txt";
  const int rc = run_tool("green --config " + (dir.path / "cfg.json").string() +
                              " --out " + dir.path.string(),
                          err.string());
  CHECK(rc == 2);
  const std::string msg = read_file(err);
  CHECK(msg.find("\"error\"") != std::string::npos);
  CHECK(msg.find("terms") != std::string::npos);
}

TEST_CASE("numerical diagnostic: exit 3") {
  TempDir dir("unstable");
  write_file(dir.path / "cfg.json", R"({
    "kernel": {"coefficients": [1.0]},
    "particle_count": 32,
    "coupling": -1.0,
    "dt": 2.0,
    "steps": 5,
    "initial": {"mode": 2, "amplitude": 0.1}
  })");
  const fs::path err = dir.path / "stderr.txt";
  const int rc = run_tool("simulate --config " + (dir.path / "cfg.json").string() +
                              " --out " + dir.path.string(),
                          err.string());
  CHECK(rc == 3);
  CHECK(read_file(err).find("\"error\"") != std::string::npos);
}

TEST_CASE("dispersion: round-trip columns") {
  TempDir dir("disp");
  write_file(dir.path / "cfg.json", R"({
    "law": {"terms": [{"alpha": 2.0, "a": -1.0}]},
    "n_max": 64,
    "k_min": 0.05, "k_max": 0.5, "k_count": 10
  })");
  REQUIRE(run_tool("dispersion --config " + (dir.path / "cfg.json").string() +
                   " --out " + dir.path.string()) == 0);
  const std::string csv = read_file(dir.path / "dispersion.csv");
  CHECK(csv.find("k,target,lattice,rel_err") != std::string::npos);
  const auto rows = read_csv(dir.path / "dispersion.csv");
  REQUIRE(rows.size() == 10);
  for (const auto& row : rows) {
    REQUIRE(row.size() == 4);
    CHECK(row[3] < 0.02);  // round-trip contract over the reported band
    CHECK(row[3] == doctest::Approx(std::abs(row[2] - row[1]) /
                                    std::abs(row[1])).epsilon(1e-9));
  }
  CHECK(fs::exists(dir.path / "kernel.csv"));
}

TEST_CASE("static: profile output shape") {
  TempDir dir("static");
  std::string force = "[";
  for (int i = 0; i < 32; ++i) {
    force += (i == 8) ? "1.0" : (i == 24 ? "-1.0" : "0.0");
    if (i != 31) force += ",";
  }
  force += "]";
  write_file(dir.path / "cfg.json",
             std::string(R"({"kernel": {"coefficients": [1.0]}, "particle_count": 32,
               "coupling": -1.0, "force": )") +
                 force + "}");
  REQUIRE(run_tool("static --config " + (dir.path / "cfg.json").string() + " --out " +
                   dir.path.string()) == 0);
  const auto rows = read_csv(dir.path / "static.csv");
  REQUIRE(rows.size() == 32);
  CHECK(rows[0].size() == 3);  // n,x,u
  CHECK(rows[0][2] == 0.0);    // pinned gauge
}

TEST_CASE("asymptote: degenerate order rejected") {
  TempDir dir("asy");
  write_file(dir.path / "cfg.json", R"({
    "terms": [{"alpha": 2.0, "c": 0.1}, {"alpha": 3.0, "c": 1.0}],
    "branch": "near", "r_min": 0.01, "r_max": 0.1, "r_count": 4
  })");
  const int rc = run_tool("asymptote --config " + (dir.path / "cfg.json").string() +
                              " --out " + dir.path.string(),
                          (dir.path / "err.txt").string());
  CHECK(rc == 2);
}
