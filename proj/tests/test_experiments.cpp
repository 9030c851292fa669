#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "resofact/experiments.hpp"

using namespace resofact;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) /
                      static_cast<double>(count - 1);
  }
  return out;
}

std::vector<std::size_t> maxima_above(const KernelProfile& p,
                                      double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 1; i + 1 < p.grid.size(); ++i) {
    if (p.mean_similarity[i] > threshold &&
        p.mean_similarity[i] > p.mean_similarity[i - 1] &&
        p.mean_similarity[i] > p.mean_similarity[i + 1]) {
      out.push_back(i);
    }
  }
  return out;
}

}  // namespace

TEST_CASE("kernel_sweep: single element peaks at itself with value ~1") {
  const std::vector<double> elements = {std::log(5.0)};
  const std::vector<double> betas = {2.1, 5.0};
  const auto grid = linspace(0.0, std::log(12.0), 200);
  const auto profiles = kernel_sweep(elements, betas, 256, 5, grid, 3);
  REQUIRE(profiles.size() == 2);
  for (const auto& p : profiles) {
    const auto peaks = maxima_above(p, 0.8);
    REQUIRE(peaks.size() == 1);
    CHECK(std::abs(p.grid[peaks[0]] - std::log(5.0)) <=
          2.0 * (p.grid[1] - p.grid[0]));
    CHECK(p.mean_similarity[peaks[0]] > 0.95);
  }
}

TEST_CASE("kernel_sweep: wide-kernel regime merges close elements") {
  const std::vector<double> elements = {std::log(2.0), std::log(3.0),
                                        std::log(5.0), std::log(11.0)};
  const std::vector<double> betas = {2.1, 5.0};
  const auto grid = linspace(0.0, std::log(12.0), 200);
  const auto profiles = kernel_sweep(elements, betas, 512, 10, grid, 7);
  CHECK(maxima_above(profiles[0], 0.3).size() < 4);  // merged at beta=2.1
  CHECK(maxima_above(profiles[1], 0.3).size() == 4);  // resolved at beta=5.0
}

TEST_CASE("kernel_sweep: profiles are stable across grid resolutions") {
  const std::vector<double> elements = {std::log(2.0), std::log(11.0)};
  const std::vector<double> betas = {5.0};
  const auto coarse = kernel_sweep(elements, betas, 256, 8,
                                   linspace(0.0, std::log(12.0), 60), 5);
  const auto fine = kernel_sweep(elements, betas, 256, 8,
                                 linspace(0.0, std::log(12.0), 240), 5);
  // sample the fine profile at the coarse grid points (every 4th + offset
  // alignment is approximate; compare by nearest grid point)
  for (std::size_t i = 0; i < coarse[0].grid.size(); ++i) {
    const double x = coarse[0].grid[i];
    std::size_t nearest = 0;
    double best = 1e9;
    for (std::size_t j = 0; j < fine[0].grid.size(); ++j) {
      const double d = std::abs(fine[0].grid[j] - x);
      if (d < best) {
        best = d;
        nearest = j;
      }
    }
    const double tolerance =
        2.0 * (coarse[0].std_similarity[i] + fine[0].std_similarity[nearest]) +
        0.05;
    CHECK(std::abs(coarse[0].mean_similarity[i] -
                   fine[0].mean_similarity[nearest]) <= tolerance);
  }
}

TEST_CASE("kernel_sweep: single run has zero standard deviation") {
  const std::vector<double> elements = {std::log(2.0)};
  const std::vector<double> betas = {3.1};
  const auto profiles = kernel_sweep(elements, betas, 128, 1,
                                     linspace(0.0, 1.0, 50), 9);
  for (double s : profiles[0].std_similarity) CHECK(s == 0.0);
}

TEST_CASE("kernel_sweep: validates inputs") {
  const auto grid = linspace(0.0, 1.0, 10);
  CHECK_THROWS_AS(kernel_sweep({}, std::vector<double>{1.0}, 64, 1, grid, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_sweep(std::vector<double>{0.5}, {}, 64, 1, grid, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(kernel_sweep(std::vector<double>{0.5},
                               std::vector<double>{1.0}, 64, 0, grid, 1),
                  std::invalid_argument);
  const std::vector<double> bad_grid = {0.5, 0.2};
  CHECK_THROWS_AS(kernel_sweep(std::vector<double>{0.5},
                               std::vector<double>{1.0}, 64, 1, bad_grid, 1),
                  std::invalid_argument);
}

TEST_CASE("accuracy_sweep: tiny codebook factorizes perfectly") {
  SweepConfig cfg;
  cfg.cardinalities = {4};
  cfg.dims = {256};
  cfg.trials_per_cell = 100;
  cfg.seed = 1;
  const SweepSummary summary = accuracy_sweep(cfg);
  REQUIRE(summary.cells.size() == 1);
  CHECK(summary.cells[0].accuracy == 1.0);
  CHECK(summary.cells[0].convergence_rate == 1.0);
  CHECK(summary.cells[0].mean_iterations < 20.0);
}

TEST_CASE("accuracy_sweep: deterministic and exact accuracy bookkeeping") {
  SweepConfig cfg;
  cfg.cardinalities = {16, 32};
  cfg.dims = {128};
  cfg.trials_per_cell = 40;
  cfg.seed = 77;
  const SweepSummary a = accuracy_sweep(cfg);
  const SweepSummary b = accuracy_sweep(cfg);
  REQUIRE(a.cells.size() == b.cells.size());
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(a.cells[i].accuracy == b.cells[i].accuracy);
    CHECK(a.cells[i].mean_iterations == b.cells[i].mean_iterations);
    CHECK(a.cells[i].convergence_rate == b.cells[i].convergence_rate);
    CHECK(a.cells[i].iterations == b.cells[i].iterations);
    // accuracy is an exact trial fraction
    const double scaled = a.cells[i].accuracy * cfg.trials_per_cell;
    CHECK(scaled == std::round(scaled));
  }
}

TEST_CASE("accuracy_sweep: accuracy trails convergence in the detected regime") {
  // Convergence detection requires the stationary similarity 1 - M/(8n) to
  // clear the 0.95 threshold, i.e. n well above 2.5*M.
  SweepConfig cfg;
  cfg.cardinalities = {8, 16};
  cfg.dims = {512};
  cfg.trials_per_cell = 50;
  cfg.seed = 5;
  const SweepSummary summary = accuracy_sweep(cfg);
  for (const auto& cell : summary.cells) {
    CHECK(cell.accuracy <= cell.convergence_rate + 0.02);
    CHECK(cell.mean_iterations <= cell.max_iters);
  }
}

TEST_CASE("accuracy_sweep: k=3 is harder than k=2 at equal cardinality") {
  SweepConfig cfg;
  cfg.cardinalities = {48};
  cfg.dims = {128};
  cfg.trials_per_cell = 60;
  cfg.seed = 13;
  const double acc2 = accuracy_sweep(cfg).cells[0].accuracy;
  cfg.k = 3;
  const double acc3 = accuracy_sweep(cfg).cells[0].accuracy;
  CHECK(acc3 < acc2);
}

TEST_CASE("min_dim_search: tiny codebooks qualify at the smallest dim") {
  // Cardinality 2 is excluded: its only distinct semiprime is the
  // degenerate stuck instance (see the resonator tests), so accuracy there
  // is a per-seed coin flip rather than trivially perfect.
  SweepConfig cfg;
  cfg.cardinalities = {4};
  cfg.dims = {16, 32, 64};
  cfg.trials_per_cell = 30;
  cfg.repeats = 3;
  cfg.seed = 3;
  const MinDimSummary md = min_dim_search(cfg);
  REQUIRE(md.cells.size() == 1);
  CHECK(md.cells[0].bounded);
  for (long long v : md.cells[0].per_run_min_n) CHECK(v == 16);
  CHECK_FALSE(md.slope_valid);  // a single cardinality has no slope
}

TEST_CASE("min_dim_search: minimal dimension grows with cardinality") {
  SweepConfig cfg;
  cfg.cardinalities = {8, 64};
  cfg.dims = {16, 32, 64, 128, 256};
  cfg.trials_per_cell = 60;
  cfg.repeats = 1;
  cfg.seed = 21;
  const MinDimSummary md = min_dim_search(cfg);
  REQUIRE(md.cells.size() == 2);
  REQUIRE(md.cells[0].bounded);
  REQUIRE(md.cells[1].bounded);
  CHECK(md.cells[1].mean_min_n >= md.cells[0].mean_min_n);
  CHECK(md.slope_valid);
}

TEST_CASE("min_dim_search: cells with no qualifying dim report unbounded") {
  SweepConfig cfg;
  cfg.cardinalities = {256};
  cfg.dims = {8, 16};  // far below the needed capacity
  cfg.trials_per_cell = 20;
  cfg.repeats = 1;
  cfg.seed = 4;
  const MinDimSummary md = min_dim_search(cfg);
  CHECK_FALSE(md.cells[0].bounded);
  CHECK(md.cells[0].per_run_min_n[0] == -1);
  CHECK_FALSE(md.slope_valid);
}

TEST_CASE("iteration_stats: aggregates match the cells") {
  SweepConfig cfg;
  cfg.cardinalities = {4};
  cfg.dims = {128};
  cfg.trials_per_cell = 50;
  cfg.seed = 8;
  const SweepSummary summary = accuracy_sweep(cfg);
  const IterationReport report = iteration_stats(summary);
  REQUIRE(report.cells.size() == 1);
  CHECK(report.cells[0].fraction_at_cap <= 0.02);  // all-correct cell
  CHECK(report.cells[0].mean == summary.cells[0].mean_iterations);
  CHECK(report.cells[0].median >= 1.0);

  const IterationReport empty = iteration_stats(SweepSummary{});
  CHECK(empty.cells.empty());
}

TEST_CASE("sweep configs are validated") {
  SweepConfig cfg;
  cfg.dims = {64};
  CHECK_THROWS_AS(accuracy_sweep(cfg), std::invalid_argument);  // no cards
  cfg.cardinalities = {4};
  cfg.dims.clear();
  CHECK_THROWS_AS(accuracy_sweep(cfg), std::invalid_argument);
  cfg.dims = {64};
  cfg.trials_per_cell = 0;
  CHECK_THROWS_AS(accuracy_sweep(cfg), std::invalid_argument);
  cfg.trials_per_cell = 10;
  cfg.success_threshold = 1.5;
  CHECK_THROWS_AS(min_dim_search(cfg), std::invalid_argument);
  cfg.success_threshold = 0.95;
  cfg.dims = {64, 32};
  CHECK_THROWS_AS(min_dim_search(cfg), std::invalid_argument);
}
