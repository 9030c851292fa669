// End-to-end tests of the resofact binary. The binary path comes from the
// RESOFACT_CLI_BIN environment variable (set by CTest).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* env = std::getenv("RESOFACT_CLI_BIN");
  REQUIRE_MESSAGE(env != nullptr, "RESOFACT_CLI_BIN must point at the binary");
  return env;
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "resofact_cli_tests";
  fs::create_directories(dir);
  return dir;
}

int run(const std::string& args, const std::string& extra_env = "") {
  const std::string cmd = extra_env + (extra_env.empty() ? "" : " ") +
                          cli_path() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// wall_time_s is the one column allowed to differ between identical runs
std::string strip_wall_time(const std::string& csv) {
  std::string out;
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    const auto cut = line.rfind(',');
    out += line.substr(0, cut);
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("factor: worked example exits 0 with the right pair") {
  const fs::path out = scratch_dir() / "factor_worked.json";
  const int code =
      run("factor 603329 --codebook window --count 512 --dim 2048 --seed 1 "
          "--out " +
          out.string());
  CHECK(code == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["predicted_factors"] == json::array({757, 797}));
  CHECK(r["correct"] == true);
  CHECK(r["iterations_used"].get<int>() < 100);
  CHECK(fs::exists(out.string() + ".manifest.json"));
}

TEST_CASE("factor: tiny composite over a small window codebook") {
  const fs::path out = scratch_dir() / "factor_tiny.json";
  const int code = run("factor 6 --codebook window --count 6 --dim 512 "
                       "--seed 1 --out " +
                       out.string());
  CHECK(code == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["predicted_factors"] == json::array({2, 3}));
}

TEST_CASE("factor: full candidate set for a small composite") {
  const fs::path out = scratch_dir() / "factor_full.json";
  // candidate_set(35) = primes <= 17
  const int code =
      run("factor 35 --codebook full --dim 256 --seed 1 --out " + out.string());
  CHECK(code == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["predicted_factors"] == json::array({5, 7}));
  CHECK(r["cardinality"] == 7);
}

TEST_CASE("factor: usage errors exit 1") {
  CHECK(run("factor 3") == 1);               // below the composite minimum
  CHECK(run("factor") == 1);                 // missing argument
  CHECK(run("factor 35 --codebook both") == 1);
  CHECK(run("bogus-subcommand") == 1);
}

TEST_CASE("factor: an undersized dimension fails with exit 2") {
  // n=32 against 512 primes is deep in the chance regime
  const int code = run("factor 603329 --codebook window --count 512 --dim 32 "
                       "--seed 1 --max-iters 25");
  CHECK(code == 2);
}

TEST_CASE("factor: --trace embeds the per-iteration decode") {
  const fs::path out = scratch_dir() / "factor_trace.json";
  const int code = run("factor 35 --codebook window --count 6 --dim 256 "
                       "--seed 2 --trace --out " +
                       out.string());
  CHECK(code == 0);
  const json r = json::parse(slurp(out));
  REQUIRE(r.contains("trace"));
  CHECK(r["trace"].size() == 2);
  CHECK(r["trace"][0].size() == r["iterations_used"].get<std::size_t>());
}

TEST_CASE("factor: environment variable supplies the default seed") {
  const fs::path a = scratch_dir() / "factor_env_a.json";
  const fs::path b = scratch_dir() / "factor_env_b.json";
  CHECK(run("factor 35 --codebook window --count 6 --dim 256 --out " +
                a.string(),
            "RESOFACT_SEED=9") == 0);
  CHECK(run("factor 35 --codebook window --count 6 --dim 256 --seed 9 --out " +
            b.string()) == 0);
  CHECK(slurp(a) == slurp(b));  // env default equals the explicit flag
  const json r = json::parse(slurp(a));
  CHECK(r["seed"] == 9);
}

TEST_CASE("factor: reruns from the manifest reproduce the file bit-for-bit") {
  const fs::path out1 = scratch_dir() / "factor_m1.json";
  const fs::path out2 = scratch_dir() / "factor_m2.json";
  // 797 is the 139th prime, so the window must reach past it
  CHECK(run("factor 603329 --count 256 --dim 1024 --seed 5 --out " +
            out1.string()) == 0);
  CHECK(run("rerun " + out1.string() + ".manifest.json --out " +
            out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("sweep: single cell CSV with the documented header") {
  const fs::path out = scratch_dir() / "sweep_small.csv";
  const int code = run("sweep --cardinalities 8 --dims 128 --trials 10 "
                       "--seed 3 --threads 2 --out " +
                       out.string());
  CHECK(code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("# schema_version=1\n", 0) == 0);
  CHECK(csv.find("cardinality,n,k,trials,accuracy,mean_iterations,"
                 "convergence_rate,wall_time_s\n") != std::string::npos);
  CHECK(csv.find("\n8,128,2,10,") != std::string::npos);
  CHECK(fs::exists(out.string() + ".manifest.json"));

  const fs::path rerun_out = scratch_dir() / "sweep_small_rerun.csv";
  CHECK(run("rerun " + out.string() + ".manifest.json --out " +
            rerun_out.string()) == 0);
  CHECK(strip_wall_time(slurp(out)) == strip_wall_time(slurp(rerun_out)));
}

TEST_CASE("sweep: config file keys with flag precedence") {
  const fs::path conf = scratch_dir() / "sweep.conf";
  {
    std::ofstream f(conf);
    f << "cardinalities=8\n"
      << "dims=128\n"
      << "trials=20\n"
      << "seed=4\n";
  }
  const fs::path out = scratch_dir() / "sweep_conf.csv";
  const int code = run("sweep --config " + conf.string() +
                       " --trials 5 --out " + out.string());
  CHECK(code == 0);
  CHECK(slurp(out).find("\n8,128,2,5,") != std::string::npos);  // flag wins
}

TEST_CASE("sweep: invalid config exits 1") {
  CHECK(run("sweep --cardinalities 8 --dims 128 --trials 0") == 1);
  CHECK(run("sweep --format xml") == 1);
}

TEST_CASE("kernel: defaults write one row per beta and grid point") {
  const fs::path out = scratch_dir() / "kernel_small.csv";
  const int code = run("kernel --betas 5.0 --runs 2 --grid 40 --dim 128 "
                       "--seed 6 --out " +
                       out.string());
  CHECK(code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.find("beta,x,mean_sim,std_sim\n") != std::string::npos);
  int rows = 0;
  for (char c : csv) rows += (c == '\n');
  CHECK(rows == 2 + 40);  // comment + header + 40 grid rows
}

TEST_CASE("kernel: single run reports zero standard deviation") {
  const fs::path out = scratch_dir() / "kernel_std0.csv";
  CHECK(run("kernel --betas 3.1 --runs 1 --grid 20 --dim 64 --seed 6 --out " +
            out.string()) == 0);
  std::istringstream lines(slurp(out));
  std::string line;
  std::getline(lines, line);  // comment
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    CHECK(line.substr(line.rfind(',') + 1) == "0");
  }
}

TEST_CASE("kernel: bad inputs exit 1") {
  CHECK(run("kernel --elements ''") == 1);
  CHECK(run("kernel --grid 1") == 1);
}

TEST_CASE("mindim: tiny search with slope reported as null for one point") {
  const fs::path out = scratch_dir() / "mindim_single.json";
  const int code = run("mindim --cardinalities 4 --dims 32,64 --trials 10 "
                       "--repeats 1 --seed 2 --out " +
                       out.string());
  CHECK(code == 0);
  const json r = json::parse(slurp(out));
  CHECK(r["slope_valid"] == false);
  CHECK(r["loglog_slope"].is_null());
  CHECK(r["cells"][0]["bounded"] == true);
}

TEST_CASE("mindim: threshold outside (0,1] exits 1") {
  CHECK(run("mindim --cardinalities 4 --dims 32 --trials 5 --threshold 1.01") ==
        1);
}

TEST_CASE("mindim: reruns reproduce the JSON bit-for-bit") {
  const fs::path out1 = scratch_dir() / "mindim_m1.json";
  const fs::path out2 = scratch_dir() / "mindim_m2.json";
  CHECK(run("mindim --cardinalities 4,8 --dims 32,64,128 --trials 10 "
            "--repeats 2 --seed 12 --out " +
            out1.string()) == 0);
  CHECK(run("rerun " + out1.string() + ".manifest.json --out " +
            out2.string()) == 0);
  CHECK(slurp(out1) == slurp(out2));
}

TEST_CASE("help text advertises the documented defaults") {
  const fs::path help_file = scratch_dir() / "help.txt";
  const std::string cmd = cli_path() + std::string(" factor --help > ") +
                          help_file.string() + " 2>&1";
  REQUIRE(std::system(cmd.c_str()) != -1);
  const std::string help = slurp(help_file);
  CHECK(help.find("100") != std::string::npos);    // max-iters default
  CHECK(help.find("10000") != std::string::npos);  // beta-scale default
  const std::string cmd2 = cli_path() + std::string(" kernel --help > ") +
                           help_file.string() + " 2>&1";
  REQUIRE(std::system(cmd2.c_str()) != -1);
  const std::string khelp = slurp(help_file);
  CHECK(khelp.find("512") != std::string::npos);  // kernel dim default
  CHECK(khelp.find("30") != std::string::npos);   // kernel runs default
  const std::string cmd3 = cli_path() + std::string(" mindim --help > ") +
                           help_file.string() + " 2>&1";
  REQUIRE(std::system(cmd3.c_str()) != -1);
  CHECK(slurp(help_file).find("0.95") != std::string::npos);  // threshold
}
