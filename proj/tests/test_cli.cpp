#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace std::string_literals;
namespace fs = std::filesystem;

namespace {

const std::string kCli = HIERMC_CLI_PATH;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream out(p);
  out << content;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Report text with the machine-dependent timing column blanked out.
std::string strip_timing(const std::string& csv) {
  std::stringstream in(csv), out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out << line.substr(0, pos) << '\n';
  }
  return out.str();
}

}  // namespace

TEST_CASE("simulate writes identical bytes on rerun") {
  TempDir dir("hiermc_cli_sim");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"example": "example1", "J": 10, "n_j": 5,
    "truth": {"mu": 2.0, "sigma2": 3.0}, "seed": 1})");
  REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " +
                  (dir.path / "a").string()) == 0);
  REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " +
                  (dir.path / "b").string()) == 0);
  CHECK(slurp(dir.path / "a/example1.csv") == slurp(dir.path / "b/example1.csv"));
  CHECK(slurp(dir.path / "a/example1_meta.json") ==
        slurp(dir.path / "b/example1_meta.json"));
  CHECK(fs::exists(dir.path / "a/manifest.json"));
}

TEST_CASE("simulate rejects an invalid J with a field-level message") {
  TempDir dir("hiermc_cli_badj");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"example": "example1", "J": 1, "n_j": 5,
    "truth": {"mu": 2.0, "sigma2": 3.0}})");
  const std::string cmd = kCli + " simulate --config " + cfg.string() +
                          " --out " + (dir.path / "out").string() + " 2> " +
                          (dir.path / "err.txt").string();
  const int rc = WEXITSTATUS(std::system(cmd.c_str()));
  CHECK(rc == 2);
  const std::string err = slurp(dir.path / "err.txt");
  CHECK(err.find("'J'") != std::string::npos);
}

TEST_CASE("simulate grid config expands to one dataset per n_j") {
  TempDir dir("hiermc_cli_grid");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"example": "example2", "J": 20,
    "truth": {"phi": 40.0, "kappa": 3.0},
    "grid": {"n_j": [5, 10, 20, 30]}, "seed": 3})");
  REQUIRE(run_cli("simulate --config " + cfg.string() + " --out " +
                  (dir.path / "out").string()) == 0);
  for (int n : {5, 10, 20, 30}) {
    CHECK(fs::exists(dir.path / ("out/example2_n" + std::to_string(n) + ".csv")));
  }
}

TEST_CASE("run produces a report and reruns match modulo timing") {
  TempDir dir("hiermc_cli_run");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"example": "example1", "J": 6, "n_j": 5,
    "truth": {"mu": 2.0, "sigma2": 3.0}, "replicates": 8, "seed": 11,
    "methods": ["fhm", "mba"],
    "rl": {"pilots": 2, "pilot_iters": 1200, "pilot_burn": 100}})");
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " +
                  (dir.path / "a").string()) == 0);
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " +
                  (dir.path / "b").string()) == 0);
  const std::string a = slurp(dir.path / "a/report.csv");
  CHECK(a.find("fhm,mu") != std::string::npos);
  CHECK(a.find("mba,sigma2") != std::string::npos);
  CHECK(strip_timing(a) == strip_timing(slurp(dir.path / "b/report.csv")));
}

TEST_CASE("run with a single method omits the other") {
  TempDir dir("hiermc_cli_single");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"example": "example1", "J": 6, "n_j": 5,
    "truth": {"mu": 2.0, "sigma2": 3.0}, "replicates": 4, "seed": 11,
    "methods": ["mba"],
    "rl": {"pilots": 2, "pilot_iters": 1200, "pilot_burn": 100}})");
  REQUIRE(run_cli("run --config " + cfg.string() + " --out " +
                  (dir.path / "out").string()) == 0);
  const std::string report = slurp(dir.path / "out/report.csv");
  CHECK(report.find("mba,") != std::string::npos);
  CHECK(report.find("fhm,") == std::string::npos);
}

TEST_CASE("run on a missing dataset fails with a config error") {
  TempDir dir("hiermc_cli_missing");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"example": "example1", "J": 6, "n_j": 5,
    "truth": {"mu": 2.0, "sigma2": 3.0}, "replicates": 2, "seed": 1,
    "dataset": "does_not_exist.csv"})");
  CHECK(run_cli("run --config " + cfg.string() + " --out " +
                (dir.path / "out").string()) == 2);
}

TEST_CASE("combine shrinks two sources toward each other") {
  TempDir dir("hiermc_cli_combine");
  // Two toy sources with clearly separated means.
  std::ostringstream a, b;
  a << "source_id,draw_index,v_1\n";
  b << "source_id,draw_index,v_1\n";
  for (int l = 1; l <= 400; ++l) {
    a << "1," << l << ',' << (1.0 + 0.05 * ((l * 37) % 20 - 10)) << '\n';
    b << "2," << l << ',' << (3.0 + 0.05 * ((l * 53) % 20 - 10)) << '\n';
  }
  fs::create_directories(dir.path / "draws");
  write_file(dir.path / "draws/a.csv", a.str());
  write_file(dir.path / "draws/b.csv", b.str());
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"family": "mvnormal", "inputs": ")"s +
                      (dir.path / "draws").string() +
                      R"(", "iters": 3000, "burn_in": 500, "seed": 5,
    "hyperprior": {"mu0": 0.0, "sigma0": 100.0, "omega": 1.0, "k": 3.0}})");
  REQUIRE(run_cli("combine --config " + cfg.string() + " --out " +
                  (dir.path / "out").string()) == 0);
  // mu posterior mean sits between the two source means.
  const std::string summary = slurp(dir.path / "out/posterior_summary.json");
  const auto pos = summary.find("\"mu\"");
  REQUIRE(pos != std::string::npos);
  const auto mpos = summary.find("\"mean\"", pos);
  const double mu = std::stod(summary.substr(summary.find(':', mpos) + 1));
  CHECK(mu > 1.0);
  CHECK(mu < 3.0);
}

TEST_CASE("combine on an empty directory is an ingestion error") {
  TempDir dir("hiermc_cli_empty");
  fs::create_directories(dir.path / "draws");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"family": "mvnormal", "inputs": ")"s +
                      (dir.path / "draws").string() +
                      R"(", "iters": 100, "seed": 5, "hyperprior": {}})");
  CHECK(run_cli("combine --config " + cfg.string() + " --out " +
                (dir.path / "out").string()) == 3);
}

TEST_CASE("retail subcommand runs the synthetic case study end to end") {
  TempDir dir("hiermc_cli_retail");
  const auto cfg = dir.path / "cfg.json";
  write_file(cfg, R"({"synthetic": {"stores": 3, "weeks": 30, "seed": 9},
    "L": 250, "stage_burn_in": 250, "iters": 400, "burn_in": 100,
    "baseline": true, "seed": 4})");
  REQUIRE(run_cli("retail --config " + cfg.string() + " --out " +
                  (dir.path / "out").string()) == 0);
  CHECK(fs::exists(dir.path / "out/mba_trace.csv"));
  CHECK(fs::exists(dir.path / "out/baseline_trace.csv"));
  CHECK(fs::exists(dir.path / "out/store_summary.json"));
  const std::string summary = slurp(dir.path / "out/store_summary.json");
  CHECK(summary.find("stage_one_acceptance") != std::string::npos);
}
