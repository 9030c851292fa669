#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "resofact/resonator.hpp"

namespace resofact {

struct SweepConfig {
  std::vector<std::size_t> cardinalities;  // codebook sizes |P(s)|
  std::vector<std::size_t> dims;           // hypervector dimensionalities n
  int trials_per_cell = 200;
  int k = 2;
  std::uint64_t start_prime = 2;
  std::uint64_t seed = 1;
  double success_threshold = 0.95;  // accuracy bar for min_dim_search
  int repeats = 3;                  // independent runs in min_dim_search
  double beta_scale = 1e4;
  bool distinct_factors = true;  // sample factors without replacement
  bool include_identity = false;
  unsigned threads = 0;  // 0 = available parallelism; never affects results
  ResonatorConfig resonator;
};

struct SweepCell {
  std::size_t cardinality = 0;
  std::size_t n = 0;
  int k = 2;
  int trials = 0;
  double accuracy = 0.0;          // exactly (correct count) / trials
  double mean_iterations = 0.0;
  double convergence_rate = 0.0;
  double wall_time_s = 0.0;
  std::vector<int> iterations;    // per-trial counts, for iteration_stats
  int max_iters = 100;
};

struct SweepSummary {
  std::vector<SweepCell> cells;
};

// Accuracy grid: for each (n, cardinality M) pair, build the codebook over
// the first M primes from start_prime, sample trials_per_cell random
// k-almost primes from it, solve the batch, and record accuracy and
// iteration statistics. Deterministic for a fixed config, including seed.
SweepSummary accuracy_sweep(const SweepConfig& cfg);

struct KernelProfile {
  double beta = 0.0;
  std::vector<double> grid;
  std::vector<double> mean_similarity;
  std::vector<double> std_similarity;
  int runs = 0;
  std::size_t n = 0;
  std::vector<double> set_elements;
};

// Superposition similarity kernels: per (beta, run), draw a fresh base
// vector, superpose the encodings of the set elements, and record the
// cosine similarity of the superposition against encode(x) over the grid.
// Mean and sample standard deviation are taken across runs.
std::vector<KernelProfile> kernel_sweep(std::span<const double> set_elements,
                                        std::span<const double> betas,
                                        std::size_t n, int runs,
                                        std::span<const double> grid,
                                        std::uint64_t seed);

struct MinDimCell {
  std::size_t cardinality = 0;
  // Smallest n from cfg.dims reaching success_threshold accuracy, one entry
  // per repeat; -1 marks a run where no n in the grid qualified.
  std::vector<long long> per_run_min_n;
  double mean_min_n = 0.0;
  bool bounded = false;  // every repeat found a qualifying n
};

struct MinDimSummary {
  std::vector<MinDimCell> cells;
  double loglog_slope = 0.0;  // least squares on (log M, log mean_min_n)
  bool slope_valid = false;   // needs >= 2 bounded cells
};

// Capacity scan: per cardinality and repeat, walk cfg.dims in ascending
// order until the measured accuracy reaches success_threshold.
MinDimSummary min_dim_search(const SweepConfig& cfg);

struct IterationCellStats {
  std::size_t cardinality = 0;
  std::size_t n = 0;
  double mean = 0.0;
  double median = 0.0;
  double fraction_at_cap = 0.0;  // trials with iterations >= max_iters
};

struct IterationReport {
  std::vector<IterationCellStats> cells;
};

// Distribution summary of per-trial iteration counts for each sweep cell.
IterationReport iteration_stats(const SweepSummary& summary);

}  // namespace resofact
