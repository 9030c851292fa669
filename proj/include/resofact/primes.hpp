#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "resofact/rng.hpp"

namespace resofact {

// Ascending list of verified primes plus a note recording how it was built.
struct PrimeSet {
  std::vector<std::uint64_t> primes;
  std::string origin;

  std::size_t size() const noexcept { return primes.size(); }
  bool empty() const noexcept { return primes.empty(); }
};

// Deterministic primality check (trial division by 2, 3 and 6k+-1).
bool is_prime(std::uint64_t m) noexcept;

// All primes <= limit via a segmented sieve.
// Throws std::invalid_argument for limit < 2 (no primes exist).
PrimeSet primes_up_to(std::uint64_t limit);

// Candidate factor set for composite s: all primes <= floor(s/2), since the
// smallest possible cofactor is 2. Throws std::invalid_argument for s < 4.
PrimeSet candidate_set(std::uint64_t s);

// The first `count` primes >= start, ascending.
// Throws std::invalid_argument for count == 0.
PrimeSet prime_window(std::uint64_t start, std::size_t count);

// Newline-delimited decimal export, one prime per line.
std::string to_text(const PrimeSet& ps);

// Composite number with known prime factorization (k factors counted with
// multiplicity). product(factors) == value exactly, checked in 128-bit.
struct CompositeSample {
  std::uint64_t value = 0;
  std::vector<std::uint64_t> factors;  // ascending

  int k() const noexcept { return static_cast<int>(factors.size()); }
};

// Draw k factors uniformly from ps, without replacement when distinct is
// set, and return their product. Throws std::invalid_argument for k < 2,
// an empty set, or an infeasible distinct draw; std::overflow_error if the
// product exceeds 64 bits.
CompositeSample sample_composite(const PrimeSet& ps, int k, Rng& rng,
                                 bool distinct = true);

// True iff every factor is prime and their product equals s exactly
// (computed in 128-bit). Never throws; an empty list returns false.
bool verify_factorization(std::uint64_t s,
                          std::span<const std::uint64_t> factors);

}  // namespace resofact
