#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resofact/codebook.hpp"
#include "resofact/phasor.hpp"
#include "resofact/primes.hpp"

namespace resofact {

enum class UpdateMode { synchronous, asynchronous };

struct ResonatorConfig {
  int max_iters = 100;
  int convergence_window = 3;
  double convergence_sim = 0.95;
  // Asynchronous updates use already-updated estimates within the same
  // iteration (factor f+1 sees factor f at t+1); synchronous updates use
  // only the estimates from iteration t. With every factor sharing one
  // codebook, all estimates start identical, and the synchronous rule
  // preserves that symmetry forever; only the asynchronous mode can pull
  // the estimates toward two distinct factors.
  UpdateMode update_mode = UpdateMode::asynchronous;
  int k = 2;
  bool keep_trace = false;
};

struct TraceEntry {
  std::uint32_t top_index = 0;
  double top_similarity = 0.0;
};

// Per-factor estimates plus the rolling convergence window. `trace` holds
// the full per-iteration history only when record_full_trace is set, so
// batch runs keep flat memory.
struct ResonatorState {
  std::vector<PhasorVector> estimates;
  int iteration = 0;
  bool record_full_trace = false;
  std::vector<std::vector<TraceEntry>> trace;   // [factor][iteration]
  std::vector<std::vector<TraceEntry>> recent;  // last convergence_window entries

  int k() const noexcept { return static_cast<int>(estimates.size()); }

  // Top index stable across the whole window and every similarity in the
  // window at or above the threshold, for all factors.
  bool converged(int window, double sim_threshold) const;
};

struct FactorizationResult {
  std::uint64_t s = 0;
  std::vector<std::uint64_t> predicted_factors;  // sorted multiset
  bool converged = false;
  int iterations_used = 0;
  bool correct = false;
  std::vector<double> final_similarities;  // in factor order
  std::vector<std::vector<TraceEntry>> trace;  // only when keep_trace
  std::string error;  // non-empty when a batched solve threw
};

// All estimates start as the normalized superposition of every codebook
// row. Throws std::invalid_argument for k < 2.
ResonatorState init_state(const Codebook& book, int k);

// One resonator iteration: for each factor in ascending order, infer it by
// binding the input with the conjugates of all other current estimates,
// project the inference onto the codebook span, renormalize to unit
// phasors, and record the cleanup of the new estimate.
void step(ResonatorState& state, const PhasorVector& s_vec,
          const Codebook& book, const ResonatorConfig& cfg);

// Full factorization run: encode z(log s), iterate until converged or
// max_iters, decode each estimate against the codebook, and product-check
// the predicted multiset (identity labels are dropped before the check).
// The prediction is an unordered multiset: which resonator found which
// factor does not matter. Non-convergence is reported, never thrown.
FactorizationResult solve(std::uint64_t s, const Codebook& book,
                          const ResonatorConfig& cfg);

// Independent solves over a shared read-only codebook, distributed across
// threads (0 = available parallelism). Output order matches input order and
// does not depend on the thread count. Per-sample failures are recorded in
// the result's `error` field instead of being thrown.
std::vector<FactorizationResult> solve_batch(
    std::span<const CompositeSample> samples, const Codebook& book,
    const ResonatorConfig& cfg, unsigned threads = 0);

}  // namespace resofact
