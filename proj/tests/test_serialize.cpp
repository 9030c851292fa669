#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <cmath>
#include <cstdlib>

#include "resofact/experiments.hpp"
#include "resofact/serialize.hpp"
#include "resofact/version.hpp"

using namespace resofact;
using nlohmann::json;

namespace {

FactorizationResult sample_result() {
  FactorizationResult r;
  r.s = 603329;
  r.predicted_factors = {757, 797};
  r.correct = true;
  r.converged = true;
  r.iterations_used = 9;
  r.final_similarities = {0.96521873250130619, 0.96618530112176236};
  return r;
}

}  // namespace

TEST_CASE("format_double: 17 significant digits round-trip") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.next_unit() - 0.5) * std::pow(10.0, (i % 40) - 20);
    const std::string text = format_double(v);
    CHECK(std::strtod(text.c_str(), nullptr) == v);
  }
}

TEST_CASE("parse_format: accepts json/csv, rejects others") {
  CHECK(parse_format("json") == OutputFormat::json);
  CHECK(parse_format("csv") == OutputFormat::csv);
  CHECK_THROWS_AS(parse_format("xml"), std::invalid_argument);
}

TEST_CASE("serialize_result: JSON structure round-trips") {
  const FactorizationResult r = sample_result();
  const json parsed = json::parse(serialize_result(r, OutputFormat::json));
  CHECK(parsed["schema_version"] == kSchemaVersion);
  CHECK(parsed["s"] == 603329);
  CHECK(parsed["predicted_factors"] == json::array({757, 797}));
  CHECK(parsed["correct"] == true);
  CHECK(parsed["converged"] == true);
  CHECK(parsed["iterations_used"] == 9);
  CHECK(parsed["final_similarities"][0].get<double>() ==
        r.final_similarities[0]);
  CHECK(parsed["final_similarities"][1].get<double>() ==
        r.final_similarities[1]);
}

TEST_CASE("serialize_result: CSV header matches the documented columns") {
  const std::string csv = serialize_result(sample_result(), OutputFormat::csv);
  CHECK(csv.find(
            "s,predicted_factors,correct,converged,iterations_used,"
            "final_similarities\n") != std::string::npos);
  CHECK(csv.find("603329,757;797,true,true,9,") != std::string::npos);
}

TEST_CASE("serialize_result: non-converged results still carry factors") {
  // deliberately undersized n so the run cannot converge
  const PrimeSet ps = prime_window(2, 64);
  const Codebook book = build_codebook(ps, 16, 5);
  ResonatorConfig cfg;
  cfg.max_iters = 20;
  const FactorizationResult r = solve(1763, book, cfg);  // 41 * 43
  REQUIRE_FALSE(r.converged);
  const json parsed = json::parse(serialize_result(r, OutputFormat::json));
  CHECK(parsed["converged"] == false);
  CHECK(parsed["predicted_factors"].size() == 2);
}

TEST_CASE("sweep CSV: fixed schema with schema_version comment") {
  SweepSummary summary;
  SweepCell cell;
  cell.cardinality = 64;
  cell.n = 512;
  cell.k = 2;
  cell.trials = 200;
  cell.accuracy = 0.995;
  cell.mean_iterations = 6.25;
  cell.convergence_rate = 1.0;
  cell.wall_time_s = 1.5;
  summary.cells.push_back(cell);
  const std::string csv = to_csv(summary);
  CHECK(csv.rfind("# schema_version=1\n", 0) == 0);
  CHECK(csv.find("cardinality,n,k,trials,accuracy,mean_iterations,"
                 "convergence_rate,wall_time_s\n") != std::string::npos);
  CHECK(csv.find("64,512,2,200,0.995") != std::string::npos);
}

TEST_CASE("sweep JSON mirrors the CSV contents") {
  SweepSummary summary;
  SweepCell cell;
  cell.cardinality = 32;
  cell.n = 256;
  cell.k = 3;
  cell.trials = 10;
  cell.accuracy = 0.5;
  summary.cells.push_back(cell);
  const json parsed = json::parse(to_json(summary));
  CHECK(parsed["schema_version"] == kSchemaVersion);
  CHECK(parsed["cells"][0]["cardinality"] == 32);
  CHECK(parsed["cells"][0]["k"] == 3);
  CHECK(parsed["cells"][0]["accuracy"].get<double>() == 0.5);
}

TEST_CASE("kernel CSV: beta,x,mean_sim,std_sim rows") {
  KernelProfile p;
  p.beta = 5.0;
  p.grid = {0.0, 0.5};
  p.mean_similarity = {1.0, 0.25};
  p.std_similarity = {0.0, 0.03125};
  const std::string csv = to_csv(std::vector<KernelProfile>{p});
  CHECK(csv.find("beta,x,mean_sim,std_sim\n") != std::string::npos);
  CHECK(csv.find("5,0,1,0\n") != std::string::npos);
  CHECK(csv.find("5,0.5,0.25,0.03125\n") != std::string::npos);
}

TEST_CASE("mindim JSON: bounded and unbounded cells") {
  MinDimSummary md;
  MinDimCell a;
  a.cardinality = 32;
  a.per_run_min_n = {64, 64, 128};
  a.mean_min_n = (64 + 64 + 128) / 3.0;
  a.bounded = true;
  MinDimCell b;
  b.cardinality = 512;
  b.per_run_min_n = {-1};
  b.bounded = false;
  md.cells = {a, b};
  md.loglog_slope = 1.02;
  md.slope_valid = true;
  const json parsed = json::parse(to_json(md));
  CHECK(parsed["cells"][0]["mean_min_n"].get<double>() ==
        doctest::Approx(85.333).epsilon(1e-3));
  CHECK(parsed["cells"][1]["bounded"] == false);
  CHECK(parsed["cells"][1]["mean_min_n"].is_null());
  CHECK(parsed["loglog_slope"].get<double>() == 1.02);
}

TEST_CASE("manifest: stable fields plus a timestamp") {
  RunManifest m;
  m.subcommand = "factor";
  m.seed = 7;
  m.config.emplace_back("s", "603329");
  m.config.emplace_back("dim", "2048");
  m.config.emplace_back("codebook", JsonObject::quote("window"));
  const json parsed = json::parse(m.to_json_string());
  CHECK(parsed["subcommand"] == "factor");
  CHECK(parsed["seed"] == 7);
  CHECK(parsed["library_version"] == kVersion);
  CHECK(parsed["config"]["s"] == 603329);
  CHECK(parsed["config"]["codebook"] == "window");
  CHECK(parsed["timestamp_utc"].get<std::string>().size() == 20);
}

TEST_CASE("JSON strings are escaped") {
  CHECK(JsonObject::quote("a\"b\\c\n") == "\"a\\\"b\\\\c\\n\"");
}
