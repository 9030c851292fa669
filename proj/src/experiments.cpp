#include "resofact/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace resofact {

namespace {

// Substream tags so the codebook draw and the trial sampling never overlap.
constexpr std::uint64_t kSampleStream = 0x53414D50;  // "SAMP"

std::uint64_t cell_seed(std::uint64_t seed, std::uint64_t cardinality,
                        std::uint64_t n, std::uint64_t repeat) {
  return Rng(seed).stream(cardinality).stream(n).stream(repeat).base();
}

void validate_common(const SweepConfig& cfg) {
  if (cfg.cardinalities.empty()) {
    throw std::invalid_argument("SweepConfig: cardinalities must be nonempty");
  }
  if (cfg.dims.empty()) {
    throw std::invalid_argument("SweepConfig: dims must be nonempty");
  }
  if (cfg.trials_per_cell < 1) {
    throw std::invalid_argument("SweepConfig: trials_per_cell must be >= 1");
  }
  if (!(cfg.success_threshold > 0.0) || cfg.success_threshold > 1.0) {
    throw std::invalid_argument(
        "SweepConfig: success_threshold must be in (0, 1]");
  }
  if (cfg.repeats < 1) {
    throw std::invalid_argument("SweepConfig: repeats must be >= 1");
  }
}

SweepCell run_cell(const SweepConfig& cfg, std::size_t cardinality,
                   std::size_t n, std::uint64_t repeat) {
  const PrimeSet ps = prime_window(cfg.start_prime, cardinality);
  const std::uint64_t bseed = cell_seed(cfg.seed, cardinality, n, repeat);

  CodebookOptions copt;
  copt.beta_scale = cfg.beta_scale;
  copt.include_identity = cfg.include_identity;
  const Codebook book = build_codebook(ps, n, bseed, copt);

  const Rng sample_root = Rng(bseed).stream(kSampleStream);
  std::vector<CompositeSample> samples(
      static_cast<std::size_t>(cfg.trials_per_cell));
  for (std::size_t t = 0; t < samples.size(); ++t) {
    Rng trial_rng = sample_root.stream(t);
    samples[t] = sample_composite(ps, cfg.k, trial_rng, cfg.distinct_factors);
  }

  ResonatorConfig rcfg = cfg.resonator;
  rcfg.k = cfg.k;

  const auto t0 = std::chrono::steady_clock::now();
  const auto results = solve_batch(samples, book, rcfg, cfg.threads);
  const auto t1 = std::chrono::steady_clock::now();

  SweepCell cell;
  cell.cardinality = cardinality;
  cell.n = n;
  cell.k = cfg.k;
  cell.trials = cfg.trials_per_cell;
  cell.max_iters = rcfg.max_iters;
  cell.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
  cell.iterations.reserve(results.size());
  int correct = 0, converged = 0;
  double iter_sum = 0.0;
  for (const auto& r : results) {
    if (!r.error.empty()) {
      throw std::runtime_error("accuracy_sweep: trial failed: " + r.error);
    }
    correct += r.correct ? 1 : 0;
    converged += r.converged ? 1 : 0;
    iter_sum += r.iterations_used;
    cell.iterations.push_back(r.iterations_used);
  }
  const double trials = static_cast<double>(cfg.trials_per_cell);
  cell.accuracy = static_cast<double>(correct) / trials;
  cell.convergence_rate = static_cast<double>(converged) / trials;
  cell.mean_iterations = iter_sum / trials;
  return cell;
}

}  // namespace

SweepSummary accuracy_sweep(const SweepConfig& cfg) {
  validate_common(cfg);
  SweepSummary summary;
  for (std::size_t n : cfg.dims) {
    for (std::size_t cardinality : cfg.cardinalities) {
      summary.cells.push_back(run_cell(cfg, cardinality, n, 0));
    }
  }
  return summary;
}

std::vector<KernelProfile> kernel_sweep(std::span<const double> set_elements,
                                        std::span<const double> betas,
                                        std::size_t n, int runs,
                                        std::span<const double> grid,
                                        std::uint64_t seed) {
  if (set_elements.empty()) {
    throw std::invalid_argument("kernel_sweep: empty element set");
  }
  if (betas.empty()) {
    throw std::invalid_argument("kernel_sweep: empty beta list");
  }
  if (runs < 1) {
    throw std::invalid_argument("kernel_sweep: runs must be >= 1");
  }
  if (grid.size() < 2) {
    throw std::invalid_argument("kernel_sweep: grid needs at least 2 points");
  }
  for (std::size_t g = 0; g + 1 < grid.size(); ++g) {
    if (grid[g + 1] <= grid[g]) {
      throw std::invalid_argument("kernel_sweep: grid must be ascending");
    }
  }

  std::vector<KernelProfile> profiles;
  profiles.reserve(betas.size());
  for (std::size_t ib = 0; ib < betas.size(); ++ib) {
    KernelProfile profile;
    profile.beta = betas[ib];
    profile.grid.assign(grid.begin(), grid.end());
    profile.runs = runs;
    profile.n = n;
    profile.set_elements.assign(set_elements.begin(), set_elements.end());

    std::vector<std::vector<double>> values(
        static_cast<std::size_t>(runs), std::vector<double>(grid.size()));
    for (int r = 0; r < runs; ++r) {
      Rng rng = Rng(seed).stream(ib).stream(static_cast<std::uint64_t>(r));
      const FpeEncoder enc(random_phasor(n, rng), betas[ib]);
      std::vector<PhasorVector> encoded;
      encoded.reserve(set_elements.size());
      for (double e : set_elements) encoded.push_back(enc.encode(e));
      const SuperposedVector s = superpose(std::span<const PhasorVector>(encoded));
      for (std::size_t g = 0; g < grid.size(); ++g) {
        values[static_cast<std::size_t>(r)][g] =
            cosine_similarity(s, enc.encode(grid[g]));
      }
    }

    profile.mean_similarity.resize(grid.size());
    profile.std_similarity.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
      double mean = 0.0;
      for (int r = 0; r < runs; ++r) {
        mean += values[static_cast<std::size_t>(r)][g];
      }
      mean /= runs;
      double var = 0.0;
      for (int r = 0; r < runs; ++r) {
        const double d = values[static_cast<std::size_t>(r)][g] - mean;
        var += d * d;
      }
      profile.mean_similarity[g] = mean;
      profile.std_similarity[g] = runs > 1 ? std::sqrt(var / (runs - 1)) : 0.0;
    }
    profiles.push_back(std::move(profile));
  }
  return profiles;
}

MinDimSummary min_dim_search(const SweepConfig& cfg) {
  validate_common(cfg);
  for (std::size_t d = 0; d + 1 < cfg.dims.size(); ++d) {
    if (cfg.dims[d + 1] <= cfg.dims[d]) {
      throw std::invalid_argument("min_dim_search: dims must be ascending");
    }
  }

  MinDimSummary summary;
  for (std::size_t cardinality : cfg.cardinalities) {
    MinDimCell cell;
    cell.cardinality = cardinality;
    for (int r = 0; r < cfg.repeats; ++r) {
      long long found = -1;
      for (std::size_t n : cfg.dims) {
        const SweepCell c =
            run_cell(cfg, cardinality, n, static_cast<std::uint64_t>(r));
        if (c.accuracy >= cfg.success_threshold) {
          found = static_cast<long long>(n);
          break;
        }
      }
      cell.per_run_min_n.push_back(found);
    }
    cell.bounded = std::all_of(cell.per_run_min_n.begin(),
                               cell.per_run_min_n.end(),
                               [](long long v) { return v > 0; });
    if (cell.bounded) {
      double sum = 0.0;
      for (long long v : cell.per_run_min_n) sum += static_cast<double>(v);
      cell.mean_min_n = sum / static_cast<double>(cell.per_run_min_n.size());
    }
    summary.cells.push_back(std::move(cell));
  }

  // log-log least squares over bounded cells
  std::vector<double> xs, ys;
  for (const auto& cell : summary.cells) {
    if (cell.bounded) {
      xs.push_back(std::log(static_cast<double>(cell.cardinality)));
      ys.push_back(std::log(cell.mean_min_n));
    }
  }
  if (xs.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxx += (xs[i] - mx) * (xs[i] - mx);
      sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx > 0.0) {
      summary.loglog_slope = sxy / sxx;
      summary.slope_valid = true;
    }
  }
  return summary;
}

IterationReport iteration_stats(const SweepSummary& summary) {
  IterationReport report;
  for (const auto& cell : summary.cells) {
    IterationCellStats stats;
    stats.cardinality = cell.cardinality;
    stats.n = cell.n;
    if (!cell.iterations.empty()) {
      std::vector<int> sorted = cell.iterations;
      std::sort(sorted.begin(), sorted.end());
      double sum = 0.0;
      int at_cap = 0;
      for (int it : sorted) {
        sum += it;
        if (it >= cell.max_iters) ++at_cap;
      }
      const std::size_t m = sorted.size();
      stats.mean = sum / static_cast<double>(m);
      stats.median = (m % 2 == 1)
                         ? sorted[m / 2]
                         : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
      stats.fraction_at_cap = static_cast<double>(at_cap) / static_cast<double>(m);
    }
    report.cells.push_back(std::move(stats));
  }
  return report;
}

}  // namespace resofact
