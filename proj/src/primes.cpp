#include "resofact/primes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace resofact {

namespace {

constexpr std::uint64_t kSegmentSize = 1u << 16;

// Classic sieve for the base primes a segmented pass needs.
std::vector<std::uint64_t> simple_sieve(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t p = 2; p * p <= limit; ++p) {
    if (composite[p]) continue;
    for (std::uint64_t q = p * p; q <= limit; q += p) composite[q] = true;
  }
  for (std::uint64_t p = 2; p <= limit; ++p) {
    if (!composite[p]) out.push_back(p);
  }
  return out;
}

std::uint64_t isqrt_u64(std::uint64_t v) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(v)));
  while (r > 0 && r * r > v) --r;
  while ((r + 1) * (r + 1) <= v) ++r;
  return r;
}

// Sieve [lo, hi] against the given base primes; emit primes in order.
template <typename Emit>
void sieve_segment(std::uint64_t lo, std::uint64_t hi,
                   std::span<const std::uint64_t> base, Emit&& emit) {
  std::vector<bool> composite(hi - lo + 1, false);
  for (std::uint64_t p : base) {
    if (p * p > hi) break;
    std::uint64_t first = std::max(p * p, ((lo + p - 1) / p) * p);
    for (std::uint64_t q = first; q <= hi; q += p) composite[q - lo] = true;
  }
  for (std::uint64_t v = std::max<std::uint64_t>(lo, 2); v <= hi; ++v) {
    if (!composite[v - lo]) emit(v);
  }
}

}  // namespace

bool is_prime(std::uint64_t m) noexcept {
  if (m < 2) return false;
  if (m < 4) return true;
  if (m % 2 == 0 || m % 3 == 0) return false;
  for (std::uint64_t i = 5; i <= m / i; i += 6) {
    if (m % i == 0 || m % (i + 2) == 0) return false;
  }
  return true;
}

PrimeSet primes_up_to(std::uint64_t limit) {
  if (limit < 2) {
    throw std::invalid_argument("primes_up_to: no primes below 2");
  }
  PrimeSet ps;
  ps.origin = "primes_up_to(" + std::to_string(limit) + ")";
  const auto base = simple_sieve(isqrt_u64(limit));
  for (std::uint64_t lo = 2; lo <= limit; lo += kSegmentSize) {
    const std::uint64_t hi = std::min(limit, lo + kSegmentSize - 1);
    sieve_segment(lo, hi, base,
                  [&](std::uint64_t p) { ps.primes.push_back(p); });
  }
  return ps;
}

PrimeSet candidate_set(std::uint64_t s) {
  if (s < 4) {
    throw std::invalid_argument("candidate_set: no composite below 4");
  }
  PrimeSet ps = primes_up_to(s / 2);
  ps.origin = "candidate_set(" + std::to_string(s) + ")";
  return ps;
}

PrimeSet prime_window(std::uint64_t start, std::size_t count) {
  if (count == 0) {
    throw std::invalid_argument("prime_window: count must be positive");
  }
  PrimeSet ps;
  ps.origin = "prime_window(" + std::to_string(start) + "," +
              std::to_string(count) + ")";
  std::uint64_t lo = std::max<std::uint64_t>(start, 2);
  std::vector<std::uint64_t> base = simple_sieve(kSegmentSize);
  while (ps.primes.size() < count) {
    const std::uint64_t hi = lo + kSegmentSize - 1;
    const std::uint64_t root = isqrt_u64(hi);
    if (base.back() < root) base = simple_sieve(root);
    sieve_segment(lo, hi, base, [&](std::uint64_t p) {
      if (ps.primes.size() < count) ps.primes.push_back(p);
    });
    lo = hi + 1;
  }
  return ps;
}

std::string to_text(const PrimeSet& ps) {
  std::string out;
  for (std::uint64_t p : ps.primes) {
    out += std::to_string(p);
    out += '\n';
  }
  return out;
}

CompositeSample sample_composite(const PrimeSet& ps, int k, Rng& rng,
                                 bool distinct) {
  if (k < 2) {
    throw std::invalid_argument("sample_composite: k must be at least 2");
  }
  if (ps.empty()) {
    throw std::invalid_argument("sample_composite: empty prime set");
  }
  if (distinct && ps.size() < static_cast<std::size_t>(k)) {
    throw std::invalid_argument(
        "sample_composite: not enough primes for a distinct draw");
  }
  CompositeSample sample;
  sample.factors.reserve(static_cast<std::size_t>(k));
  std::vector<std::size_t> chosen;
  while (sample.factors.size() < static_cast<std::size_t>(k)) {
    const std::size_t idx =
        static_cast<std::size_t>(rng.next_below(ps.size()));
    if (distinct &&
        std::find(chosen.begin(), chosen.end(), idx) != chosen.end()) {
      continue;
    }
    chosen.push_back(idx);
    sample.factors.push_back(ps.primes[idx]);
  }
  std::sort(sample.factors.begin(), sample.factors.end());
  unsigned __int128 product = 1;
  for (std::uint64_t f : sample.factors) product *= f;
  if (product > std::numeric_limits<std::uint64_t>::max()) {
    throw std::overflow_error("sample_composite: product exceeds 64 bits");
  }
  sample.value = static_cast<std::uint64_t>(product);
  return sample;
}

bool verify_factorization(std::uint64_t s,
                          std::span<const std::uint64_t> factors) {
  if (factors.empty()) return false;
  unsigned __int128 product = 1;
  for (std::uint64_t f : factors) {
    if (f < 2 || !is_prime(f)) return false;
    product *= f;
    if (product > std::numeric_limits<std::uint64_t>::max()) return false;
  }
  return product == s;
}

}  // namespace resofact
