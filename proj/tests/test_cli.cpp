#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "json.hpp"
#include "oracle.hpp"
#include "specoarse/aggregation.hpp"
#include "specoarse/generators.hpp"
#include "specoarse/matrix_market.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace specoarse;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  static std::atomic<int> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("specoarse-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++) + "-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::vector<double> csv_values(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::string line;
  std::getline(in, line);
  CHECK(line == "value,residual,iterations,sample,shift");
  std::vector<double> out;
  while (std::getline(in, line)) out.push_back(std::stod(line.substr(0, line.find(','))));
  return out;
}

// Key/value lines such as "min 0.39" printed by extremes, verify and gershgorin.
double field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string k, rest;
  while (in >> k) {
    std::getline(in, rest);
    if (k == key) return std::stod(rest);
  }
  FAIL("missing field " << key);
  return 0;
}

std::string word(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string k, v;
  while (in >> k >> v)
    if (k == key) return v;
  return {};
}

double nearest(const std::vector<double>& xs, double v) {
  double best = INFINITY;
  for (double x : xs) best = std::min(best, std::abs(x - v));
  return best;
}

}  // namespace

TEST_CASE("estimate-eig on lap1d:4 refines to the two smallest eigenvalues") {
  const fs::path dir = scratch("lap1d");
  const auto r = run_cli({"estimate-eig", "--gen", "lap1d:4", "--samples", "1", "--coarse", "2", "--per-sample", "2",
                      "--partitioner", "bfs", "--seed", "7", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto values = csv_values(dir / "estimate.csv");
  REQUIRE(values.size() == 2);
  CHECK(values[0] == doctest::Approx(2 - 2 * std::cos(std::numbers::pi / 5)).epsilon(1e-12));
  CHECK(values[1] == doctest::Approx(2 - 2 * std::cos(2 * std::numbers::pi / 5)).epsilon(1e-12));
  CHECK(fs::exists(dir / "estimate.json"));
  CHECK(fs::exists(dir / "manifest.json"));
}

TEST_CASE("estimate-eig with a partition file uses it for every sample") {
  const fs::path dir = scratch("partfile");
  {
    std::ofstream p(dir / "part.txt");
    p << "0 0\n1 0\n2 1\n3 1\n";
  }
  const auto r = run_cli({"estimate-eig", "--gen", "lap1d:4", "--samples", "3", "--partition-file",
                      (dir / "part.txt").string(), "--out", (dir / "run").string()});
  REQUIRE(r.code == cli::kExitOk);
  const json est = read_json(dir / "run" / "estimate.json");
  REQUIRE(est["samples"].size() == 3);
  for (const auto& s : est["samples"]) {
    CHECK(s["coarse_values"][0].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s["coarse_values"][1].get<double>() == doctest::Approx(1.5).epsilon(1e-12));
  }
  CHECK(csv_values(dir / "run" / "estimate.csv").size() == 2);
}

TEST_CASE("missing matrix file is an input error naming the path") {
  const fs::path dir = scratch("missing");
  const std::string path = (dir / "missing.mtx").string();
  const auto r = run_cli({"estimate-eig", "--matrix", path, "--out", (dir / "out").string()});
  CHECK(r.code == cli::kExitInput);
  CHECK(r.err.find(path) != std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run_cli({"estimate-eig", "--gen", "lap1d:4", "--samples", "0"}).code == cli::kExitInput);
  CHECK(run_cli({"estimate-eig"}).code == cli::kExitInput);
  CHECK(run_cli({"estimate-eig", "--gen", "lap1d:4", "--matrix", "a.mtx"}).code == cli::kExitInput);
  CHECK(run_cli({"estimate-eig", "--gen", "bogus:4"}).code == cli::kExitInput);
  CHECK(run_cli({"estimate-svd", "--gen", "rand:5", "--partitioner", "bfs"}).code == cli::kExitInput);
  CHECK(run_cli({"no-such-command"}).code == cli::kExitInput);
  CHECK(run_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("--paper-literal is recorded and disables interlacing checks") {
  const fs::path dir = scratch("literal");
  const auto r = run_cli({"estimate-eig", "--gen", "lap1d:4", "--samples", "1", "--coarse", "2", "--per-sample", "2",
                      "--partitioner", "bfs", "--seed", "7", "--paper-literal", "--oracle", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  const json m = read_json(dir / "manifest.json");
  CHECK(m["config"]["normalized"] == false);
  CHECK(m["interlace_check"].get<std::string>().rfind("skipped", 0) == 0);
  CHECK(r.out.find("interlacing skipped") != std::string::npos);
  // Unnormalized shifts still refine to true eigenvalues.
  for (double v : csv_values(dir / "estimate.csv")) CHECK(nearest(oracle::laplacian_1d_eigenvalues(4), v) < 1e-10);
}

TEST_CASE("estimate-svd runs on square, tiny and rectangular generators") {
  SUBCASE("rand:1") {
    const fs::path dir = scratch("svd1");
    REQUIRE(run_cli({"estimate-svd", "--gen", "rand:1", "--samples", "1", "--out", dir.string()}).code == cli::kExitOk);
    const auto v = csv_values(dir / "estimate.csv");
    REQUIRE(v.size() == 1);
    const auto a = generate(parse_generator_spec("rand:1"));
    CHECK(v[0] == doctest::Approx(std::abs(a.values()[0])).epsilon(1e-12));
  }
  SUBCASE("rand:8x5") {
    const fs::path dir = scratch("svd85");
    const auto r = run_cli({"estimate-svd", "--gen", "rand:8x5", "--samples", "4", "--coarse", "3", "--seed", "2",
                        "--oracle", "--out", dir.string()});
    REQUIRE(r.code == cli::kExitOk);
    const json m = read_json(dir / "manifest.json");
    CHECK(m["matrix"]["rows"] == 8);
    CHECK(m["matrix"]["cols"] == 5);
    const auto v = csv_values(dir / "estimate.csv");
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] < v[i - 1]);
  }
  SUBCASE("rand:50 with 5 samples of 22 aggregates") {
    const fs::path dir = scratch("svd50");
    const auto r = run_cli({"estimate-svd", "--gen", "rand:50", "--samples", "5", "--coarse", "22", "--svg", "--oracle",
                        "--out", dir.string()});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(fs::exists(dir / "spectrum.svg"));
    const auto sigma = oracle::singular_values(generate(parse_generator_spec("rand:50")));
    const auto v = csv_values(dir / "estimate.csv");
    REQUIRE_FALSE(v.empty());
    for (double x : v) CHECK(nearest(sigma, x) <= 1e-8 * sigma.front());
  }
}

TEST_CASE("extremes on lap2d:8x8 are inner bounds") {
  const fs::path dir = scratch("extremes");
  const auto r = run_cli({"extremes", "--gen", "lap2d:8x8", "--samples", "16", "--oracle", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  const auto lambda = oracle::eigenvalues(generate(parse_generator_spec("lap2d:8x8")));
  const double lo = field(r.out, "min"), hi = field(r.out, "max");
  CHECK(lambda.front() <= lo);
  CHECK(hi <= lambda.back());
  CHECK(field(r.out, "oracle_min") == doctest::Approx(lambda.front()).epsilon(1e-10));
  CHECK(field(r.out, "slack_min") >= 0);
  CHECK(field(r.out, "slack_max") >= 0);
  const json j = read_json(dir / "extremes.json");
  CHECK(j["min"].get<double>() == lo);
  CHECK(j["max"].get<double>() == hi);
}

TEST_CASE("extremes with one aggregate per node are exact") {
  const auto r = run_cli({"extremes", "--gen", "lap1d:12", "--samples", "2", "--coarse", "12"});
  REQUIRE(r.code == cli::kExitOk);
  const auto lambda = oracle::laplacian_1d_eigenvalues(12);
  CHECK(field(r.out, "min") == doctest::Approx(lambda.front()).epsilon(1e-12));
  CHECK(field(r.out, "max") == doctest::Approx(lambda.back()).epsilon(1e-12));
}

TEST_CASE("extremes rejects zero samples") {
  CHECK(run_cli({"extremes", "--gen", "lap1d:12", "--samples", "0"}).code == cli::kExitInput);
}

TEST_CASE("verify writes a slack table and passes on normalized interpolation") {
  const fs::path dir = scratch("verify");
  const auto r = run_cli({"verify", "--gen", "sky:5x5x5", "--trials", "6", "--coarse", "13", "--partitioner", "bfs",
                      "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(field(r.out, "violations") == 0);
  CHECK(field(r.out, "min_slack") >= -1e-9);
  const std::string table = slurp(dir / "verify.csv");
  CHECK(table.rfind("trial,index,coarse,lower_slack,upper_slack,lower_vacuous\n", 0) == 0);
  CHECK(std::count(table.begin(), table.end(), '\n') == 1 + 6 * 13);
  CHECK(read_json(dir / "verify.json")["violations"] == 0);

  const fs::path sdir = scratch("verify-svd");
  const auto s = run_cli({"verify", "--gen", "rand:10x6", "--svd", "--trials", "3", "--coarse", "4", "--coarse-cols", "3",
                      "--out", sdir.string()});
  REQUIRE(s.code == cli::kExitOk);
  const json sj = read_json(sdir / "verify.json");
  for (const auto& t : sj["trials"])
    for (const auto& vac : t["lower_vacuous"]) CHECK(vac == true);
}

TEST_CASE("gershgorin writes discs and separates the SDD M-matrix case") {
  const fs::path dir = scratch("gersh");
  const auto r = run_cli({"gershgorin", "--gen", "sky:4x4x4", "--oracle", "--out", dir.string()});
  REQUIRE(r.code == cli::kExitOk);
  CHECK(field(r.out, "discs") == 64);
  CHECK(field(r.out, "eigenvalues_outside_discs") == 0);
  CHECK(slurp(dir / "gershgorin.csv").rfind("center,radius\n", 0) == 0);
  CHECK(slurp(dir / "gershgorin.svg").find("<svg") != std::string::npos);

  const std::size_t dims[] = {5, 5};
  {
    std::ofstream mtx(dir / "shifted.mtx");
    write_matrix_market(mtx, gen_shifted_laplacian(dims, 0.25));
  }
  const auto m = run_cli({"gershgorin", "--matrix", (dir / "shifted.mtx").string(), "--oracle", "--out",
                      (dir / "m").string()});
  REQUIRE(m.code == cli::kExitOk);
  CHECK(word(m.out, "sdd_m_matrix") == "yes");
  CHECK(word(m.out, "excludes_zero") == "yes");
  CHECK(field(m.out, "eigenvalues_outside_discs") == 0);
}

TEST_CASE("partition command writes node/aggregate lines") {
  const fs::path dir = scratch("partition");
  const fs::path file = dir / "p.txt";
  REQUIRE(run_cli({"partition", "--gen", "lap1d:10", "--coarse", "3", "--partitioner", "random", "--seed", "4", "--out",
               file.string()})
              .code == cli::kExitOk);
  const Partition p = load_partition(file);
  CHECK(p.size() == 10);
  CHECK(p.n_aggregates() == 3);
  const auto r = run_cli({"partition", "--gen", "lap1d:10", "--coarse", "3", "--partitioner", "random", "--seed", "4"});
  CHECK(r.out == slurp(file));
}

TEST_CASE("replay reproduces estimate outputs byte for byte") {
  for (const std::string cmd : {"estimate-eig", "estimate-svd"}) {
    CAPTURE(cmd);
    const fs::path dir = scratch("replay");
    const std::string gen = cmd == "estimate-eig" ? "sky:4x4x4" : "rand:12x9";
    REQUIRE(run_cli({cmd, "--gen", gen, "--samples", "3", "--seed", "11", "--out", (dir / "a").string()}).code ==
            cli::kExitOk);
    REQUIRE(run_cli({"replay", "--manifest", (dir / "a" / "manifest.json").string(), "--out", (dir / "b").string()})
                .code == cli::kExitOk);
    CHECK(slurp(dir / "a" / "estimate.json") == slurp(dir / "b" / "estimate.json"));
    CHECK(slurp(dir / "a" / "estimate.csv") == slurp(dir / "b" / "estimate.csv"));
  }
}

TEST_CASE("--threads 1 and --threads 8 give identical files") {
  for (const std::string cmd : {"estimate-eig", "estimate-svd"}) {
    CAPTURE(cmd);
    const fs::path dir = scratch("threads");
    const std::string gen = cmd == "estimate-eig" ? "lap2d:8x8" : "rand:30x20";
    for (const char* t : {"1", "8"}) {
      REQUIRE(run_cli({cmd, "--gen", gen, "--samples", "6", "--seed", "3", "--threads", t, "--out",
                   (dir / t).string()})
                  .code == cli::kExitOk);
    }
    CHECK(slurp(dir / "1" / "estimate.json") == slurp(dir / "8" / "estimate.json"));
    CHECK(slurp(dir / "1" / "estimate.csv") == slurp(dir / "8" / "estimate.csv"));
  }
}

TEST_CASE("CSV and JSON value lists agree exactly") {
  const fs::path dir = scratch("agree");
  REQUIRE(run_cli({"estimate-eig", "--gen", "randsym:40", "--samples", "4", "--coarse", "8", "--partitioner", "random",
               "--out", dir.string()})
              .code == cli::kExitOk);
  const auto from_csv = csv_values(dir / "estimate.csv");
  const auto from_json = read_json(dir / "estimate.json")["values"].get<std::vector<double>>();
  CHECK(from_csv == from_json);
}

TEST_CASE("SPECOARSE_SEED supplies the default seed") {
  const fs::path dir = scratch("envseed");
  ::setenv("SPECOARSE_SEED", "123", 1);
  const int code = run_cli({"estimate-eig", "--gen", "lap1d:20", "--samples", "1", "--out", dir.string()}).code;
  ::unsetenv("SPECOARSE_SEED");
  REQUIRE(code == cli::kExitOk);
  CHECK(read_json(dir / "manifest.json")["config"]["seed"] == 123);
}

TEST_CASE("spectrum-plot emits an SVG") {
  const fs::path dir = scratch("plot");
  REQUIRE(run_cli({"spectrum-plot", "--gen", "sky:4x4x4", "--samples", "2", "--out", dir.string()}).code ==
          cli::kExitOk);
  const std::string svg = slurp(dir / "spectrum.svg");
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}
