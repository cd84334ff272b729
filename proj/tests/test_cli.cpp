#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "common.hpp"
#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CmdResult run_cli(const std::string& args) {
  static int counter = 0;
  const char* bin = std::getenv("RKM_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "RKM_BIN must point at the rkm binary");
  const fs::path dir = fs::temp_directory_path();
  const fs::path out_file = dir / ("rkm_cli_out_" + std::to_string(++counter));
  const fs::path err_file = dir / ("rkm_cli_err_" + std::to_string(counter));
  const std::string cmd = std::string("\"") + bin + "\" " + args + " > " +
                          out_file.string() + " 2> " + err_file.string();
  const int rc = std::system(cmd.c_str());
  CmdResult res;
  res.exit_code = WEXITSTATUS(rc);
  res.out = slurp(out_file);
  res.err = slurp(err_file);
  fs::remove(out_file);
  fs::remove(err_file);
  return res;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

TEST_CASE("spectral-norm subcommand emits the result JSON") {
  const auto res = run_cli("spectral-norm --kernel gaussian --a 0.1 --n 50 --d 20 --seed 7");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j.contains("spectral_norm"));
  CHECK(j.contains("iterations"));
  CHECK(j.contains("converged"));
  CHECK(j.contains("residual"));
  CHECK(j["converged"].get<bool>());
  CHECK(j["spectral_norm"].get<double>() <= 50.0 + 1e-9);
}

TEST_CASE("attack with zero noise recovers every label") {
  const auto res = run_cli("attack --beta 0 --n 100 --d 50 --lambda 1 --seed 1 --trials 5");
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 6);
  CHECK(lines[0] == "seed,beta,hamming,recovered_fraction,lemma_bound,spectral_norm");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 6);
    CHECK(fields[2] == "0");  // hamming
    CHECK(fields[3] == "1");  // recovered fraction
  }
}

TEST_CASE("missing required flag exits 2 and names the flag") {
  const auto res = run_cli("krr --n 10 --d 4");
  CHECK(res.exit_code == 2);
  CHECK(res.err.find("--lambda") != std::string::npos);
}

TEST_CASE("unknown subcommand exits 2") {
  CHECK(run_cli("frobnicate").exit_code == 2);
}

TEST_CASE("invalid numeric arguments exit 2") {
  CHECK(run_cli("sample --d 0 --n 5").exit_code == 2);
  CHECK(run_cli("spectral-norm --kernel gaussian --a -1 --n 5 --d 3").exit_code == 2);
}

TEST_CASE("help exits 0 and lists the subcommands") {
  const auto res = run_cli("--help");
  CHECK(res.exit_code == 0);
  for (const char* name : {"sample", "kernel-matrix", "spectral-norm", "figure1", "figure2",
                           "lower-regime", "mixture", "calibrate", "krr", "attack",
                           "privacy-sweep"})
    CHECK(res.out.find(name) != std::string::npos);
  CHECK(run_cli("attack --help").exit_code == 0);
}

TEST_CASE("sample output is deterministic and supports a header") {
  const std::string args = "sample --dist rademacher --d 3 --n 4 --seed 9";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.out == b.out);
  CHECK(lines_of(a.out).size() == 4);

  const auto with_header = run_cli(args + " --header");
  const auto lines = lines_of(with_header.out);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "x0,x1,x2");
}

TEST_CASE("kernel-matrix emits an n x n grid with a unit diagonal") {
  const auto res = run_cli("kernel-matrix --kernel gaussian --a 0.3 --n 6 --d 4 --seed 2");
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 6);
  for (std::size_t i = 0; i < 6; ++i) {
    const auto fields = split_csv(lines[i]);
    REQUIRE(fields.size() == 6);
    CHECK(fields[i] == "1");
  }
}

TEST_CASE("sweeps write reproducible CSV plus a provenance sidecar") {
  const fs::path dir = fs::temp_directory_path();
  const fs::path csv1 = dir / "rkm_f2_a.csv";
  const fs::path csv2 = dir / "rkm_f2_b.csv";
  const std::string base = "figure2 --n-grid 16,32 --d 10 --runs 2 --seed 5 --out ";
  REQUIRE(run_cli(base + csv1.string()).exit_code == 0);
  REQUIRE(run_cli(base + csv2.string()).exit_code == 0);
  CHECK(rkm::testing::strip_wall_time(slurp(csv1)) ==
        rkm::testing::strip_wall_time(slurp(csv2)));

  const fs::path sidecar = dir / "rkm_f2_a.json";
  REQUIRE(fs::exists(sidecar));
  const auto meta = nlohmann::json::parse(slurp(sidecar));
  CHECK(meta["command"] == "figure2");
  CHECK(meta["bounds"]["C0"].get<double>() == 1.0);
  CHECK(meta["base_seed"].get<std::uint64_t>() == 5);
  fs::remove(csv1);
  fs::remove(csv2);
  fs::remove(sidecar);
  fs::remove(dir / "rkm_f2_b.json");
}

TEST_CASE("config file sets constants and flags override it") {
  const fs::path dir = fs::temp_directory_path();
  const fs::path cfg = dir / "rkm_cfg.json";
  {
    std::ofstream out(cfg);
    out << "{\"C0\": 2.5, \"delta\": 0.5}\n";
  }
  const fs::path csv = dir / "rkm_f1_cfg.csv";
  const std::string base = "figure1 --n-grid 8 --d 6 --runs 1 --seed 3 --out " + csv.string();
  REQUIRE(run_cli(base + " --config " + cfg.string()).exit_code == 0);
  auto meta = nlohmann::json::parse(slurp(dir / "rkm_f1_cfg.json"));
  CHECK(meta["bounds"]["C0"].get<double>() == 2.5);
  CHECK(meta["bounds"]["delta"].get<double>() == 0.5);

  REQUIRE(run_cli(base + " --config " + cfg.string() + " --C0 3.5").exit_code == 0);
  meta = nlohmann::json::parse(slurp(dir / "rkm_f1_cfg.json"));
  CHECK(meta["bounds"]["C0"].get<double>() == 3.5);   // flag wins
  CHECK(meta["bounds"]["delta"].get<double>() == 0.5);  // file still applies

  // the env var supplies the default config path
  const char* bin = std::getenv("RKM_BIN");
  REQUIRE(bin != nullptr);
  const std::string env_cmd = "RKM_CONFIG=" + cfg.string() + " \"" + std::string(bin) +
                              "\" " + base + " > /dev/null 2>&1";
  REQUIRE(WEXITSTATUS(std::system(env_cmd.c_str())) == 0);
  meta = nlohmann::json::parse(slurp(dir / "rkm_f1_cfg.json"));
  CHECK(meta["bounds"]["C0"].get<double>() == 2.5);

  fs::remove(cfg);
  fs::remove(csv);
  fs::remove(dir / "rkm_f1_cfg.json");
}

TEST_CASE("krr exports the fitted model") {
  const auto res = run_cli("krr --n 12 --d 4 --kernel gaussian --a 0.4 --lambda 0.5 --seed 6");
  REQUIRE(res.exit_code == 0);
  const auto j = nlohmann::json::parse(res.out);
  CHECK(j["lambda"].get<double>() == 0.5);
  CHECK(j["spec"]["family"] == "gaussian");
  CHECK(j["alpha"].size() == 12);
  CHECK(j["seed_of_support"].get<std::uint64_t>() == 6);

  // labels from a file
  const fs::path labels = fs::temp_directory_path() / "rkm_labels.csv";
  {
    std::ofstream out(labels);
    for (int i = 0; i < 12; ++i) out << (i % 2) << "\n";
  }
  const auto res2 = run_cli("krr --n 12 --d 4 --lambda 0.5 --seed 6 --labels " +
                            labels.string());
  CHECK(res2.exit_code == 0);
  CHECK(nlohmann::json::parse(res2.out)["alpha"].size() == 12);
  // wrong length is a runtime failure, not a usage error
  const auto res3 =
      run_cli("krr --n 10 --d 4 --lambda 0.5 --seed 6 --labels " + labels.string());
  CHECK(res3.exit_code == 1);
  fs::remove(labels);
}

TEST_CASE("privacy-sweep prints the aggregate schema") {
  const auto res =
      run_cli("privacy-sweep --n 20 --d 6 --lambda 1 --trials 2 --seed 4 --beta-grid 0,0.01");
  REQUIRE(res.exit_code == 0);
  const auto lines = lines_of(res.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "beta,median_hamming,lemma_bound");
  CHECK(split_csv(lines[1])[0] == "0");
}
