#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "resofact/fpe.hpp"
#include "resofact/phasor.hpp"
#include "resofact/primes.hpp"

namespace resofact {

struct CodebookOptions {
  double beta_scale = 1e4;
  bool include_identity = false;

  // Retain float32 cos/sin tables for the matrix passes. Roughly triples
  // codebook memory (8 -> 24 bytes per entry) and speeds up cleanup/project
  // by an order of magnitude. When disabled, the passes stream over the
  // phase rows in chunks and compute trig on the fly in full double
  // precision; the two modes agree to about 1e-6 in similarity.
  bool trig_cache = true;

  // Row-block granularity for generation and streaming passes.
  std::size_t chunk_rows = 256;
};

struct CleanupResult {
  std::size_t index = 0;
  double similarity = 0.0;
};

// Item memory over a prime set: row i is the log-FPE hypervector of
// labels[i] (encode_log under a base vector drawn from `seed` and a
// bandwidth from select_beta). Phases are the canonical storage; complex
// values are never materialized for the whole matrix. Immutable after
// build, safe to share across threads.
class Codebook {
 public:
  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return n_; }
  double beta() const noexcept { return encoder_.beta(); }
  std::uint64_t seed() const noexcept { return seed_; }
  bool includes_identity() const noexcept { return includes_identity_; }
  bool has_trig_cache() const noexcept { return !cos_.empty(); }
  const FpeEncoder& encoder() const noexcept { return encoder_; }

  std::uint64_t label(std::size_t i) const { return labels_[i]; }
  std::span<const std::uint64_t> labels() const noexcept { return labels_; }
  std::span<const double> row_phases(std::size_t i) const {
    return {phases_.data() + i * n_, n_};
  }
  PhasorVector row(std::size_t i) const;

  // Best-matching row: argmax_i similarity(row_i, v), ties broken by the
  // lowest index. Throws std::invalid_argument on dimension mismatch.
  CleanupResult cleanup(const PhasorVector& v) const;
  CleanupResult cleanup(const SuperposedVector& v) const;

  // c = Re(Phi^dagger v), one real coefficient per row. Raw values: no
  // rectification or clipping, matching the resonator update.
  std::vector<double> coefficients(const PhasorVector& v) const;
  std::vector<double> coefficients(const SuperposedVector& v) const;

  // Phi * Re(Phi^dagger v): span-constrained version of v.
  SuperposedVector project(const PhasorVector& v) const;
  SuperposedVector project(const SuperposedVector& v) const;

  // Componentwise sum of all rows (the resonator's initial estimate before
  // normalization).
  SuperposedVector superpose_rows() const;

  // Binary export/import; see README for the exact byte layout.
  void save(const std::filesystem::path& path) const;
  static Codebook load(const std::filesystem::path& path);

  static std::size_t estimated_bytes(std::size_t count, std::size_t n,
                                     bool trig_cache);

 private:
  friend Codebook build_codebook(const PrimeSet&, std::size_t, std::uint64_t,
                                 const CodebookOptions&);

  Codebook(std::vector<std::uint64_t> labels, std::vector<double> phases,
           FpeEncoder encoder, std::uint64_t seed, bool includes_identity,
           bool trig_cache, std::size_t chunk_rows);

  void build_trig_cache();
  std::vector<double> coefficients_impl(const double* re, const double* im,
                                        const float* fre,
                                        const float* fim) const;
  SuperposedVector synthesize(const std::vector<double>& c) const;

  std::vector<std::uint64_t> labels_;
  std::vector<double> phases_;  // row-major, size() * dim()
  std::vector<float> cos_, sin_;
  FpeEncoder encoder_;
  std::uint64_t seed_ = 0;
  std::size_t n_ = 0;
  bool includes_identity_ = false;
  std::size_t chunk_rows_ = 256;
};

// Draws the base vector from Rng(seed), picks beta via select_beta over the
// supplied primes (a single-prime set falls back to beta = beta_scale, since
// there is no adjacent gap to separate), fills row i with encode_log(p_i),
// and prepends the all-ones identity row with label 1 when requested.
// Labels are validated: strictly ascending and prime.
Codebook build_codebook(const PrimeSet& primes, std::size_t n,
                        std::uint64_t seed, const CodebookOptions& options = {});

}  // namespace resofact
