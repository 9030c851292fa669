#include "resofact/resonator.hpp"

#include <algorithm>
#include <stdexcept>

#include "resofact/parallel.hpp"

namespace resofact {

namespace {

void validate_config(const ResonatorConfig& cfg) {
  if (cfg.max_iters < 1) {
    throw std::invalid_argument("ResonatorConfig: max_iters must be >= 1");
  }
  if (cfg.convergence_window < 1 || cfg.convergence_window > cfg.max_iters) {
    throw std::invalid_argument(
        "ResonatorConfig: convergence_window must be in [1, max_iters]");
  }
  if (!(cfg.convergence_sim > 0.0) || cfg.convergence_sim > 1.0) {
    throw std::invalid_argument(
        "ResonatorConfig: convergence_sim must be in (0, 1]");
  }
  if (cfg.k < 2) {
    throw std::invalid_argument("ResonatorConfig: k must be >= 2");
  }
}

}  // namespace

bool ResonatorState::converged(int window, double sim_threshold) const {
  for (const auto& entries : recent) {
    if (entries.size() < static_cast<std::size_t>(window)) return false;
    const std::uint32_t index = entries.back().top_index;
    for (const TraceEntry& e : entries) {
      if (e.top_index != index) return false;
      if (e.top_similarity < sim_threshold) return false;
    }
  }
  return !recent.empty();
}

ResonatorState init_state(const Codebook& book, int k) {
  if (k < 2) {
    throw std::invalid_argument("init_state: k must be >= 2");
  }
  if (book.size() == 0) {
    throw std::invalid_argument("init_state: empty codebook");
  }
  ResonatorState state;
  PhasorVector initial = normalize_phasor(book.superpose_rows());
  state.estimates.assign(static_cast<std::size_t>(k), initial);
  state.trace.resize(static_cast<std::size_t>(k));
  state.recent.resize(static_cast<std::size_t>(k));
  return state;
}

void step(ResonatorState& state, const PhasorVector& s_vec,
          const Codebook& book, const ResonatorConfig& cfg) {
  const std::size_t n = book.dim();
  const int k = state.k();
  if (k < 2) {
    throw std::invalid_argument("step: state must hold at least 2 estimates");
  }
  if (s_vec.dim() != n) {
    throw std::invalid_argument("step: input dimension mismatch");
  }
  for (const auto& est : state.estimates) {
    if (est.dim() != n) {
      throw std::invalid_argument("step: estimate dimension mismatch");
    }
  }

  const bool synchronous = cfg.update_mode == UpdateMode::synchronous;
  const std::vector<PhasorVector> snapshot =
      synchronous ? state.estimates : std::vector<PhasorVector>{};
  const std::vector<PhasorVector>& source =
      synchronous ? snapshot : state.estimates;

  std::vector<double> inferred(n);
  for (int f = 0; f < k; ++f) {
    for (std::size_t j = 0; j < n; ++j) {
      double p = s_vec.phase(j);
      for (int g = 0; g < k; ++g) {
        if (g != f) p -= source[static_cast<std::size_t>(g)].phase(j);
      }
      inferred[j] = reduce_phase(p);
    }
    const SuperposedVector projected =
        book.project(PhasorVector(std::vector<double>(inferred)));
    PhasorVector estimate = normalize_phasor(projected);
    const CleanupResult top = book.cleanup(estimate);
    state.estimates[static_cast<std::size_t>(f)] = std::move(estimate);

    auto& window = state.recent[static_cast<std::size_t>(f)];
    window.push_back({static_cast<std::uint32_t>(top.index), top.similarity});
    if (window.size() > static_cast<std::size_t>(cfg.convergence_window)) {
      window.erase(window.begin());
    }
    if (state.record_full_trace) {
      state.trace[static_cast<std::size_t>(f)].push_back(window.back());
    }
  }
  ++state.iteration;
}

FactorizationResult solve(std::uint64_t s, const Codebook& book,
                          const ResonatorConfig& cfg) {
  validate_config(cfg);
  if (s < 4) {
    throw std::invalid_argument("solve: s must be a composite >= 4");
  }
  const PhasorVector s_vec = book.encoder().encode_log(s);
  ResonatorState state = init_state(book, cfg.k);
  state.record_full_trace = cfg.keep_trace;

  FactorizationResult result;
  result.s = s;
  while (state.iteration < cfg.max_iters) {
    step(state, s_vec, book, cfg);
    if (state.converged(cfg.convergence_window, cfg.convergence_sim)) {
      result.converged = true;
      break;
    }
  }
  result.iterations_used = state.iteration;

  std::vector<std::uint64_t> labels;
  for (const auto& window : state.recent) {
    const TraceEntry& last = window.back();
    labels.push_back(book.label(last.top_index));
    result.final_similarities.push_back(last.top_similarity);
  }
  result.predicted_factors = labels;
  std::sort(result.predicted_factors.begin(), result.predicted_factors.end());

  // Identity labels stand for "no factor here" when the codebook carries the
  // all-ones row; they do not participate in the product check.
  std::vector<std::uint64_t> effective;
  for (std::uint64_t l : result.predicted_factors) {
    if (l != 1) effective.push_back(l);
  }
  result.correct = verify_factorization(s, effective);
  if (cfg.keep_trace) result.trace = std::move(state.trace);
  return result;
}

std::vector<FactorizationResult> solve_batch(
    std::span<const CompositeSample> samples, const Codebook& book,
    const ResonatorConfig& cfg, unsigned threads) {
  std::vector<FactorizationResult> results(samples.size());
  parallel_for(samples.size(), threads, [&](std::size_t i) {
    try {
      results[i] = solve(samples[i].value, book, cfg);
    } catch (const std::exception& e) {
      results[i] = FactorizationResult{};
      results[i].s = samples[i].value;
      results[i].error = e.what();
    }
  });
  return results;
}

}  // namespace resofact
