// Command-line frontend: factorization runs, accuracy/scaling/kernel
// sweeps, and manifest-driven reruns. Exit codes: 0 success, 1 usage/config
// error, 2 solver failed to factor.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "resofact/codebook.hpp"
#include "resofact/experiments.hpp"
#include "resofact/serialize.hpp"
#include "resofact/version.hpp"

using namespace resofact;

namespace {

constexpr const char* kSeedEnvVar = "RESOFACT_SEED";
constexpr std::uint64_t kDefaultSeed = 1;

std::uint64_t resolve_seed(bool seed_given, std::uint64_t seed_flag) {
  if (seed_given) return seed_flag;
  if (const char* env = std::getenv(kSeedEnvVar)) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(kSeedEnvVar) +
                                 " is not an unsigned integer: " + env);
    }
  }
  return kDefaultSeed;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << body;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// Every result file is paired with <file>.manifest.json.
void emit(const std::string& body, const std::string& out_path,
          const RunManifest& manifest) {
  if (out_path.empty()) {
    std::cout << body;
    return;
  }
  write_file(out_path, body);
  write_file(out_path + ".manifest.json", manifest.to_json_string());
  std::cerr << "wrote " << out_path << " (+manifest)\n";
}

std::string bool_literal(bool b) { return b ? "true" : "false"; }

std::string size_list_literal(const std::vector<std::size_t>& vs) {
  std::string out = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(vs[i]);
  }
  return out + "]";
}

std::string double_list_literal(const std::vector<double>& vs) {
  std::string out = "[";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i > 0) out += ", ";
    out += format_double(vs[i]);
  }
  return out + "]";
}

UpdateMode parse_update_mode(const std::string& name) {
  if (name == "asynchronous") return UpdateMode::asynchronous;
  if (name == "synchronous") return UpdateMode::synchronous;
  throw CLI::ValidationError("update mode must be synchronous|asynchronous");
}

// key = value lines, '#' comments, lists comma-separated
std::vector<std::pair<std::string, std::string>> read_kv_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("cannot open config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!key.empty()) entries.emplace_back(key, value);
  }
  return entries;
}

template <typename T>
std::vector<T> parse_list(const std::string& value) {
  std::vector<T> out;
  std::istringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(static_cast<T>(std::stoull(item)));
  }
  return out;
}

bool parse_bool(const std::string& value, const std::string& key) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw CLI::ValidationError("config key '" + key + "' must be true|false");
}

// ---------------------------------------------------------------- factor --

struct FactorOptions {
  std::uint64_t s = 0;
  std::string codebook_mode = "window";
  std::uint64_t start_prime = 2;
  std::size_t count = 512;
  std::size_t dim = 2048;
  int k = 2;
  double beta_scale = 1e4;
  int max_iters = 100;
  int convergence_window = 3;
  double convergence_sim = 0.95;
  std::string update_mode = "asynchronous";
  std::uint64_t seed = kDefaultSeed;
  int restarts = 0;
  bool identity = false;
  bool trace = false;
  bool no_trig_cache = false;
  double memory_budget_mb = 4096.0;
  std::string out;
};

RunManifest factor_manifest(const FactorOptions& o) {
  RunManifest m;
  m.subcommand = "factor";
  m.seed = o.seed;
  m.config.emplace_back("s", std::to_string(o.s));
  m.config.emplace_back("codebook", JsonObject::quote(o.codebook_mode));
  m.config.emplace_back("start_prime", std::to_string(o.start_prime));
  m.config.emplace_back("count", std::to_string(o.count));
  m.config.emplace_back("dim", std::to_string(o.dim));
  m.config.emplace_back("factors", std::to_string(o.k));
  m.config.emplace_back("beta_scale", format_double(o.beta_scale));
  m.config.emplace_back("max_iters", std::to_string(o.max_iters));
  m.config.emplace_back("convergence_window",
                        std::to_string(o.convergence_window));
  m.config.emplace_back("convergence_sim", format_double(o.convergence_sim));
  m.config.emplace_back("update_mode", JsonObject::quote(o.update_mode));
  m.config.emplace_back("restarts", std::to_string(o.restarts));
  m.config.emplace_back("identity", bool_literal(o.identity));
  m.config.emplace_back("trace", bool_literal(o.trace));
  m.config.emplace_back("no_trig_cache", bool_literal(o.no_trig_cache));
  m.config.emplace_back("memory_budget_mb", format_double(o.memory_budget_mb));
  return m;
}

int run_factor(const FactorOptions& o) {
  if (o.s < 4) {
    std::cerr << "error: s must be a composite integer >= 4\n";
    return 1;
  }
  PrimeSet primes;
  if (o.codebook_mode == "full") {
    primes = candidate_set(o.s);
  } else if (o.codebook_mode == "window") {
    primes = prime_window(o.start_prime, o.count);
  } else {
    std::cerr << "error: --codebook must be 'full' or 'window'\n";
    return 1;
  }

  CodebookOptions copt;
  copt.beta_scale = o.beta_scale;
  copt.include_identity = o.identity;
  copt.trig_cache = !o.no_trig_cache;
  const std::size_t rows = primes.size() + (o.identity ? 1 : 0);
  const double estimated_mb =
      static_cast<double>(
          Codebook::estimated_bytes(rows, o.dim, copt.trig_cache)) /
      (1024.0 * 1024.0);
  if (estimated_mb > o.memory_budget_mb) {
    std::cerr << "warning: estimated codebook memory " << estimated_mb
              << " MiB exceeds budget " << o.memory_budget_mb
              << " MiB (|P|=" << primes.size() << ", n=" << o.dim
              << "); consider --codebook window, a smaller --dim, or "
                 "--no-trig-cache\n";
  }

  ResonatorConfig rcfg;
  rcfg.max_iters = o.max_iters;
  rcfg.convergence_window = o.convergence_window;
  rcfg.convergence_sim = o.convergence_sim;
  rcfg.update_mode = parse_update_mode(o.update_mode);
  rcfg.k = o.k;
  rcfg.keep_trace = o.trace;

  FactorizationResult result;
  std::uint64_t attempt_seed = o.seed;
  int attempts_used = 0;
  for (int attempt = 0; attempt <= o.restarts; ++attempt) {
    attempt_seed =
        attempt == 0
            ? o.seed
            : Rng(o.seed).stream(static_cast<std::uint64_t>(attempt)).base();
    const Codebook book = build_codebook(primes, o.dim, attempt_seed, copt);
    result = solve(o.s, book, rcfg);
    attempts_used = attempt + 1;
    if (result.correct) break;
  }

  JsonObject obj;
  obj.add_integer("schema_version", kSchemaVersion);
  obj.add_unsigned("s", o.s);
  obj.add_integer("k", o.k);
  obj.add_unsigned("n", o.dim);
  obj.add_unsigned("cardinality", primes.size());
  obj.add_string("codebook", o.codebook_mode);
  obj.add_unsigned("seed", o.seed);
  obj.add_unsigned("codebook_seed", attempt_seed);
  obj.add_integer("attempts_used", attempts_used);
  obj.add_raw("predicted_factors",
              JsonObject::array_of_unsigned(result.predicted_factors));
  obj.add_bool("correct", result.correct);
  obj.add_bool("converged", result.converged);
  obj.add_integer("iterations_used", result.iterations_used);
  obj.add_raw("final_similarities",
              JsonObject::array_of_doubles(result.final_similarities));
  if (o.trace) {
    std::string trace = "[";
    for (std::size_t f = 0; f < result.trace.size(); ++f) {
      if (f > 0) trace += ", ";
      trace += "[";
      for (std::size_t t = 0; t < result.trace[f].size(); ++t) {
        if (t > 0) trace += ", ";
        trace += "{\"index\": " + std::to_string(result.trace[f][t].top_index) +
                 ", \"similarity\": " +
                 format_double(result.trace[f][t].top_similarity) + "}";
      }
      trace += "]";
    }
    trace += "]";
    obj.add_raw("trace", trace);
  }

  emit(obj.str() + "\n", o.out, factor_manifest(o));
  return result.correct ? 0 : 2;
}

// ----------------------------------------------------------------- sweep --

struct SweepOptions {
  std::vector<std::size_t> cardinalities = {64, 128, 256, 512, 1024};
  std::vector<std::size_t> dims = {512};
  int trials = 200;
  int k = 2;
  std::uint64_t start_prime = 2;
  std::uint64_t seed = kDefaultSeed;
  int max_iters = 100;
  int convergence_window = 3;
  double convergence_sim = 0.95;
  std::string update_mode = "asynchronous";
  double beta_scale = 1e4;
  bool allow_repeats = false;  // sample factors with replacement
  bool identity = false;
  unsigned threads = 0;
  std::string format = "csv";
  std::string out;
};

// Applied before flag parsing, so command-line flags take precedence.
void apply_sweep_config_file(SweepOptions& o, const std::string& path,
                             bool& seed_given) {
  for (const auto& [key, value] : read_kv_file(path)) {
    if (key == "cardinalities") {
      o.cardinalities = parse_list<std::size_t>(value);
    } else if (key == "dims") {
      o.dims = parse_list<std::size_t>(value);
    } else if (key == "trials") {
      o.trials = std::stoi(value);
    } else if (key == "factors") {
      o.k = std::stoi(value);
    } else if (key == "start_prime") {
      o.start_prime = std::stoull(value);
    } else if (key == "seed") {
      o.seed = std::stoull(value);
      seed_given = true;
    } else if (key == "max_iters") {
      o.max_iters = std::stoi(value);
    } else if (key == "convergence_window") {
      o.convergence_window = std::stoi(value);
    } else if (key == "convergence_sim") {
      o.convergence_sim = std::stod(value);
    } else if (key == "update_mode") {
      o.update_mode = value;
    } else if (key == "beta_scale") {
      o.beta_scale = std::stod(value);
    } else if (key == "allow_repeats") {
      o.allow_repeats = parse_bool(value, key);
    } else if (key == "identity") {
      o.identity = parse_bool(value, key);
    } else if (key == "threads") {
      o.threads = static_cast<unsigned>(std::stoul(value));
    } else if (key == "format") {
      o.format = value;
    } else {
      throw CLI::ValidationError("unknown config key '" + key + "'");
    }
  }
}

SweepConfig to_sweep_config(const SweepOptions& o) {
  SweepConfig cfg;
  cfg.cardinalities = o.cardinalities;
  cfg.dims = o.dims;
  cfg.trials_per_cell = o.trials;
  cfg.k = o.k;
  cfg.start_prime = o.start_prime;
  cfg.seed = o.seed;
  cfg.beta_scale = o.beta_scale;
  cfg.distinct_factors = !o.allow_repeats;
  cfg.include_identity = o.identity;
  cfg.threads = o.threads;
  cfg.resonator.max_iters = o.max_iters;
  cfg.resonator.convergence_window = o.convergence_window;
  cfg.resonator.convergence_sim = o.convergence_sim;
  cfg.resonator.update_mode = parse_update_mode(o.update_mode);
  cfg.resonator.k = o.k;
  return cfg;
}

void append_sweep_config(RunManifest& m, const SweepOptions& o) {
  m.config.emplace_back("cardinalities", size_list_literal(o.cardinalities));
  m.config.emplace_back("dims", size_list_literal(o.dims));
  m.config.emplace_back("trials", std::to_string(o.trials));
  m.config.emplace_back("factors", std::to_string(o.k));
  m.config.emplace_back("start_prime", std::to_string(o.start_prime));
  m.config.emplace_back("max_iters", std::to_string(o.max_iters));
  m.config.emplace_back("convergence_window",
                        std::to_string(o.convergence_window));
  m.config.emplace_back("convergence_sim", format_double(o.convergence_sim));
  m.config.emplace_back("update_mode", JsonObject::quote(o.update_mode));
  m.config.emplace_back("beta_scale", format_double(o.beta_scale));
  m.config.emplace_back("allow_repeats", bool_literal(o.allow_repeats));
  m.config.emplace_back("identity", bool_literal(o.identity));
}

RunManifest sweep_manifest(const SweepOptions& o) {
  RunManifest m;
  m.subcommand = "sweep";
  m.seed = o.seed;
  append_sweep_config(m, o);
  m.config.emplace_back("format", JsonObject::quote(o.format));
  return m;
}

int run_sweep(const SweepOptions& o) {
  const OutputFormat format = parse_format(o.format);
  const SweepSummary summary = accuracy_sweep(to_sweep_config(o));
  const std::string body =
      format == OutputFormat::csv ? to_csv(summary) : to_json(summary);
  emit(body, o.out, sweep_manifest(o));
  return 0;
}

// ---------------------------------------------------------------- kernel --

struct KernelOptions {
  std::vector<std::string> elements = {"log:2", "log:3", "log:5", "log:11"};
  std::vector<double> betas = {2.1, 3.1, 5.0};
  std::size_t dim = 512;
  int runs = 30;
  int grid_points = 400;
  double grid_min = 0.0;
  double grid_max = std::log(12.0);
  std::uint64_t seed = kDefaultSeed;
  std::string out;
};

std::vector<double> parse_elements(const std::vector<std::string>& raw) {
  std::vector<double> out;
  for (const std::string& item : raw) {
    if (item.rfind("log:", 0) == 0) {
      const double v = std::stod(item.substr(4));
      if (v <= 0.0) throw CLI::ValidationError("log: argument must be > 0");
      out.push_back(std::log(v));
    } else {
      out.push_back(std::stod(item));
    }
  }
  return out;
}

RunManifest kernel_manifest(const KernelOptions& o) {
  RunManifest m;
  m.subcommand = "kernel";
  m.seed = o.seed;
  std::string elements = "[";
  for (std::size_t i = 0; i < o.elements.size(); ++i) {
    if (i > 0) elements += ", ";
    elements += JsonObject::quote(o.elements[i]);
  }
  elements += "]";
  m.config.emplace_back("elements", elements);
  m.config.emplace_back("betas", double_list_literal(o.betas));
  m.config.emplace_back("dim", std::to_string(o.dim));
  m.config.emplace_back("runs", std::to_string(o.runs));
  m.config.emplace_back("grid_points", std::to_string(o.grid_points));
  m.config.emplace_back("grid_min", format_double(o.grid_min));
  m.config.emplace_back("grid_max", format_double(o.grid_max));
  return m;
}

int run_kernel(const KernelOptions& o) {
  if (o.elements.empty()) {
    std::cerr << "error: --elements must be nonempty\n";
    return 1;
  }
  if (o.grid_points < 2 || o.grid_max <= o.grid_min) {
    std::cerr << "error: grid must have >= 2 ascending points\n";
    return 1;
  }
  const std::vector<double> elements = parse_elements(o.elements);
  std::vector<double> grid(static_cast<std::size_t>(o.grid_points));
  for (int g = 0; g < o.grid_points; ++g) {
    grid[static_cast<std::size_t>(g)] =
        o.grid_min +
        (o.grid_max - o.grid_min) * g / static_cast<double>(o.grid_points - 1);
  }
  const auto profiles =
      kernel_sweep(elements, o.betas, o.dim, o.runs, grid, o.seed);
  emit(to_csv(profiles), o.out, kernel_manifest(o));
  return 0;
}

// ---------------------------------------------------------------- mindim --

struct MindimOptions {
  std::vector<std::size_t> cardinalities = {32, 64, 128, 256, 512};
  std::vector<std::size_t> dims = {16, 32, 64, 128, 256, 512, 1024, 2048};
  int trials = 200;
  int repeats = 3;
  double threshold = 0.95;
  std::vector<std::uint64_t> start_primes = {2};
  int k = 2;
  int max_iters = 100;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 0;
  std::string out;
};

RunManifest mindim_manifest(const MindimOptions& o) {
  RunManifest m;
  m.subcommand = "mindim";
  m.seed = o.seed;
  m.config.emplace_back("cardinalities", size_list_literal(o.cardinalities));
  m.config.emplace_back("dims", size_list_literal(o.dims));
  m.config.emplace_back("trials", std::to_string(o.trials));
  m.config.emplace_back("repeats", std::to_string(o.repeats));
  m.config.emplace_back("threshold", format_double(o.threshold));
  std::string sp = "[";
  for (std::size_t i = 0; i < o.start_primes.size(); ++i) {
    if (i > 0) sp += ", ";
    sp += std::to_string(o.start_primes[i]);
  }
  sp += "]";
  m.config.emplace_back("start_primes", sp);
  m.config.emplace_back("factors", std::to_string(o.k));
  m.config.emplace_back("max_iters", std::to_string(o.max_iters));
  return m;
}

int run_mindim(const MindimOptions& o) {
  if (!(o.threshold > 0.0) || o.threshold > 1.0) {
    std::cerr << "error: --threshold must be in (0, 1]\n";
    return 1;
  }
  if (o.start_primes.empty()) {
    std::cerr << "error: --start-primes must be nonempty\n";
    return 1;
  }
  std::vector<MinDimSummary> summaries;
  for (std::uint64_t start : o.start_primes) {
    SweepConfig cfg;
    cfg.cardinalities = o.cardinalities;
    cfg.dims = o.dims;
    cfg.trials_per_cell = o.trials;
    cfg.repeats = o.repeats;
    cfg.success_threshold = o.threshold;
    cfg.k = o.k;
    cfg.resonator.k = o.k;
    cfg.resonator.max_iters = o.max_iters;
    cfg.start_prime = start;
    cfg.seed = o.seed;
    cfg.threads = o.threads;
    summaries.push_back(min_dim_search(cfg));
  }
  std::string body;
  if (summaries.size() == 1) {
    body = to_json(summaries[0]);
  } else {
    body = "[";
    for (std::size_t i = 0; i < summaries.size(); ++i) {
      if (i > 0) body += ", ";
      std::string one = to_json(summaries[i]);
      while (!one.empty() && one.back() == '\n') one.pop_back();
      body += one;
    }
    body += "]\n";
  }
  emit(body, o.out, mindim_manifest(o));
  return 0;
}

// ----------------------------------------------------------------- rerun --

// Rebuild the option structs from a manifest's resolved config and re-run.
int dispatch_manifest(const std::string& path,
                      const std::string& out_override) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open manifest " << path << "\n";
    return 1;
  }
  nlohmann::json m;
  try {
    in >> m;
  } catch (const std::exception& e) {
    std::cerr << "error: manifest parse failed: " << e.what() << "\n";
    return 1;
  }
  const std::string sub = m.value("subcommand", "");
  const auto& cfg = m.at("config");
  const std::uint64_t seed = m.value("seed", kDefaultSeed);

  if (sub == "factor") {
    FactorOptions o;
    o.s = cfg.at("s").get<std::uint64_t>();
    o.codebook_mode = cfg.at("codebook").get<std::string>();
    o.start_prime = cfg.at("start_prime").get<std::uint64_t>();
    o.count = cfg.at("count").get<std::size_t>();
    o.dim = cfg.at("dim").get<std::size_t>();
    o.k = cfg.at("factors").get<int>();
    o.beta_scale = cfg.at("beta_scale").get<double>();
    o.max_iters = cfg.at("max_iters").get<int>();
    o.convergence_window = cfg.at("convergence_window").get<int>();
    o.convergence_sim = cfg.at("convergence_sim").get<double>();
    o.update_mode = cfg.at("update_mode").get<std::string>();
    o.restarts = cfg.at("restarts").get<int>();
    o.identity = cfg.at("identity").get<bool>();
    o.trace = cfg.at("trace").get<bool>();
    o.no_trig_cache = cfg.at("no_trig_cache").get<bool>();
    o.memory_budget_mb = cfg.at("memory_budget_mb").get<double>();
    o.seed = seed;
    o.out = out_override;
    return run_factor(o);
  }
  if (sub == "sweep") {
    SweepOptions o;
    o.cardinalities = cfg.at("cardinalities").get<std::vector<std::size_t>>();
    o.dims = cfg.at("dims").get<std::vector<std::size_t>>();
    o.trials = cfg.at("trials").get<int>();
    o.k = cfg.at("factors").get<int>();
    o.start_prime = cfg.at("start_prime").get<std::uint64_t>();
    o.max_iters = cfg.at("max_iters").get<int>();
    o.convergence_window = cfg.at("convergence_window").get<int>();
    o.convergence_sim = cfg.at("convergence_sim").get<double>();
    o.update_mode = cfg.at("update_mode").get<std::string>();
    o.beta_scale = cfg.at("beta_scale").get<double>();
    o.allow_repeats = cfg.at("allow_repeats").get<bool>();
    o.identity = cfg.at("identity").get<bool>();
    o.format = cfg.at("format").get<std::string>();
    o.seed = seed;
    o.out = out_override;
    return run_sweep(o);
  }
  if (sub == "kernel") {
    KernelOptions o;
    o.elements = cfg.at("elements").get<std::vector<std::string>>();
    o.betas = cfg.at("betas").get<std::vector<double>>();
    o.dim = cfg.at("dim").get<std::size_t>();
    o.runs = cfg.at("runs").get<int>();
    o.grid_points = cfg.at("grid_points").get<int>();
    o.grid_min = cfg.at("grid_min").get<double>();
    o.grid_max = cfg.at("grid_max").get<double>();
    o.seed = seed;
    o.out = out_override;
    return run_kernel(o);
  }
  if (sub == "mindim") {
    MindimOptions o;
    o.cardinalities = cfg.at("cardinalities").get<std::vector<std::size_t>>();
    o.dims = cfg.at("dims").get<std::vector<std::size_t>>();
    o.trials = cfg.at("trials").get<int>();
    o.repeats = cfg.at("repeats").get<int>();
    o.threshold = cfg.at("threshold").get<double>();
    o.start_primes = cfg.at("start_primes").get<std::vector<std::uint64_t>>();
    o.k = cfg.at("factors").get<int>();
    o.max_iters = cfg.at("max_iters").get<int>();
    o.seed = seed;
    o.out = out_override;
    return run_mindim(o);
  }
  std::cerr << "error: unknown subcommand in manifest: " << sub << "\n";
  return 1;
}

// ------------------------------------------------------------------ main --

int run_cli(int argc, char** argv) {
  CLI::App app{"resofact: integer factorization with resonator networks over "
               "complex-phasor hypervectors"};
  app.require_subcommand(1);

  FactorOptions fo;
  bool factor_seed_given = false;
  CLI::App* factor = app.add_subcommand(
      "factor", "Factor one composite integer with the resonator network");
  factor->add_option("s", fo.s, "Composite integer to factor (>= 4)")
      ->required();
  factor->add_option("--codebook", fo.codebook_mode,
                     "Prime set: 'window' (first --count primes from "
                     "--start-prime) or 'full' (all primes <= s/2)")
      ->capture_default_str();
  factor->add_option("--start-prime", fo.start_prime,
                     "First prime of the window codebook")
      ->capture_default_str();
  factor->add_option("--count", fo.count, "Window codebook size")
      ->capture_default_str();
  factor->add_option("--dim", fo.dim, "Hypervector dimensionality n")
      ->capture_default_str();
  factor->add_option("--factors", fo.k, "Number of prime factors k")
      ->capture_default_str();
  factor->add_option("--beta-scale", fo.beta_scale,
                     "Numerator scale in the bandwidth rule")
      ->capture_default_str();
  factor->add_option("--max-iters", fo.max_iters, "Iteration cap")
      ->capture_default_str();
  factor->add_option("--convergence-window", fo.convergence_window,
                     "Consecutive stable iterations required")
      ->capture_default_str();
  factor->add_option("--convergence-sim", fo.convergence_sim,
                     "Similarity threshold for convergence")
      ->capture_default_str();
  factor->add_option("--update-mode", fo.update_mode,
                     "synchronous|asynchronous")
      ->capture_default_str();
  factor
      ->add_option("--seed", fo.seed,
                   "Base-vector seed (default: $RESOFACT_SEED, then 1)")
      ->capture_default_str()
      ->trigger_on_parse()
      ->each([&](const std::string&) { factor_seed_given = true; });
  factor->add_option("--restarts", fo.restarts,
                     "Retries with fresh base vectors after a miss")
      ->capture_default_str();
  factor->add_flag("--identity", fo.identity,
                   "Prepend the all-ones identity row (label 1)");
  factor->add_flag("--trace", fo.trace,
                   "Record the per-iteration decode trace in the output");
  factor->add_flag("--no-trig-cache", fo.no_trig_cache,
                   "Stream over phases instead of caching cos/sin tables");
  factor->add_option("--memory-budget-mb", fo.memory_budget_mb,
                     "Warn when the codebook estimate exceeds this many MiB")
      ->capture_default_str();
  factor->add_option("--out", fo.out, "Write the result JSON here");

  SweepOptions so;
  bool sweep_seed_given = false;
  // The config file is applied before parsing so that explicit flags win.
  try {
    for (int i = 1; i + 1 < argc; ++i) {
      if (std::string(argv[i]) == "--config") {
        apply_sweep_config_file(so, argv[i + 1], sweep_seed_given);
        break;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::string sweep_config_path;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "Accuracy vs codebook cardinality (CSV or JSON rows)");
  sweep->add_option("--config", sweep_config_path,
                    "Config file with key=value lines (flags take precedence)");
  sweep->add_option("--cardinalities", so.cardinalities,
                    "Codebook sizes |P(s)|")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--dims", so.dims, "Hypervector dimensionalities")
      ->delimiter(',')
      ->capture_default_str();
  sweep->add_option("--trials", so.trials, "Random composites per cell")
      ->capture_default_str();
  sweep->add_option("--factors", so.k, "Number of prime factors k")
      ->capture_default_str();
  sweep->add_option("--start-prime", so.start_prime, "First codebook prime")
      ->capture_default_str();
  sweep->add_option("--max-iters", so.max_iters, "Iteration cap")
      ->capture_default_str();
  sweep->add_option("--convergence-window", so.convergence_window,
                    "Consecutive stable iterations required")
      ->capture_default_str();
  sweep->add_option("--convergence-sim", so.convergence_sim,
                    "Similarity threshold for convergence")
      ->capture_default_str();
  sweep->add_option("--update-mode", so.update_mode,
                    "synchronous|asynchronous")
      ->capture_default_str();
  sweep->add_option("--beta-scale", so.beta_scale, "Bandwidth rule scale")
      ->capture_default_str();
  sweep->add_flag("--allow-repeats", so.allow_repeats,
                  "Sample factors with replacement (x = y allowed)");
  sweep->add_flag("--identity", so.identity, "Include the identity row");
  sweep->add_option("--threads", so.threads,
                    "Worker threads (0 = hardware; results never depend on it)")
      ->capture_default_str();
  sweep
      ->add_option("--seed", so.seed,
                   "Sweep seed (default: $RESOFACT_SEED, then 1)")
      ->capture_default_str()
      ->trigger_on_parse()
      ->each([&](const std::string&) { sweep_seed_given = true; });
  sweep->add_option("--format", so.format, "json|csv")->capture_default_str();
  sweep->add_option("--out", so.out, "Write rows here");

  KernelOptions ko;
  bool kernel_seed_given = false;
  CLI::App* kernel = app.add_subcommand(
      "kernel", "Superposition similarity kernels over a scalar grid (CSV)");
  kernel->add_option("--elements", ko.elements,
                     "Set elements: reals or log:<integer>")
      ->delimiter(',')
      ->capture_default_str();
  kernel->add_option("--betas", ko.betas, "Bandwidths to profile")
      ->delimiter(',')
      ->capture_default_str();
  kernel->add_option("--dim", ko.dim, "Hypervector dimensionality")
      ->capture_default_str();
  kernel->add_option("--runs", ko.runs, "Simulation runs to average")
      ->capture_default_str();
  kernel->add_option("--grid", ko.grid_points, "Grid point count")
      ->capture_default_str();
  kernel->add_option("--grid-min", ko.grid_min, "Grid start")
      ->capture_default_str();
  kernel->add_option("--grid-max", ko.grid_max, "Grid end")
      ->capture_default_str();
  kernel
      ->add_option("--seed", ko.seed,
                   "Base-vector seed root (default: $RESOFACT_SEED, then 1)")
      ->capture_default_str()
      ->trigger_on_parse()
      ->each([&](const std::string&) { kernel_seed_given = true; });
  kernel->add_option("--out", ko.out, "Write CSV here");

  MindimOptions mo;
  bool mindim_seed_given = false;
  CLI::App* mindim = app.add_subcommand(
      "mindim",
      "Minimal dimensionality for a target accuracy, plus log-log slope");
  mindim->add_option("--cardinalities", mo.cardinalities, "Codebook sizes")
      ->delimiter(',')
      ->capture_default_str();
  mindim->add_option("--dims", mo.dims, "Ascending dimensionality grid")
      ->delimiter(',')
      ->capture_default_str();
  mindim->add_option("--trials", mo.trials, "Trials per cell")
      ->capture_default_str();
  mindim->add_option("--repeats", mo.repeats, "Independent runs to average")
      ->capture_default_str();
  mindim->add_option("--threshold", mo.threshold, "Target accuracy in (0,1]")
      ->capture_default_str();
  mindim->add_option("--start-primes", mo.start_primes,
                     "Window start points, one search per entry")
      ->delimiter(',')
      ->capture_default_str();
  mindim->add_option("--factors", mo.k, "Number of prime factors k")
      ->capture_default_str();
  mindim->add_option("--max-iters", mo.max_iters, "Iteration cap")
      ->capture_default_str();
  mindim->add_option("--threads", mo.threads, "Worker threads")
      ->capture_default_str();
  mindim
      ->add_option("--seed", mo.seed,
                   "Search seed (default: $RESOFACT_SEED, then 1)")
      ->capture_default_str()
      ->trigger_on_parse()
      ->each([&](const std::string&) { mindim_seed_given = true; });
  mindim->add_option("--out", mo.out, "Write the JSON table here");

  std::string rerun_path;
  std::string rerun_out;
  CLI::App* rerun =
      app.add_subcommand("rerun", "Re-execute a run from its manifest file");
  rerun->add_option("manifest", rerun_path, "Path to a *.manifest.json file")
      ->required();
  rerun->add_option("--out", rerun_out, "Override the output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // prints help, exit 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (factor->parsed()) {
      fo.seed = resolve_seed(factor_seed_given, fo.seed);
      return run_factor(fo);
    }
    if (sweep->parsed()) {
      so.seed = resolve_seed(sweep_seed_given, so.seed);
      return run_sweep(so);
    }
    if (kernel->parsed()) {
      ko.seed = resolve_seed(kernel_seed_given, ko.seed);
      return run_kernel(ko);
    }
    if (mindim->parsed()) {
      mo.seed = resolve_seed(mindim_seed_given, mo.seed);
      return run_mindim(mo);
    }
    if (rerun->parsed()) {
      return dispatch_manifest(rerun_path, rerun_out);
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) { return run_cli(argc, argv); }
