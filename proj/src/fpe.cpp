#include "resofact/fpe.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace resofact {

FpeEncoder::FpeEncoder(PhasorVector base, double beta)
    : base_(std::move(base)), beta_(beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("FpeEncoder: beta must be positive and finite");
  }
  if (base_.dim() == 0) {
    throw std::invalid_argument("FpeEncoder: base vector must be non-empty");
  }
}

FpeEncoder FpeEncoder::make_random(std::size_t n, double beta, Rng& rng) {
  return FpeEncoder(random_phasor(n, rng), beta);
}

PhasorVector FpeEncoder::encode(double x) const {
  if (!std::isfinite(x)) {
    throw std::domain_error("FpeEncoder::encode: x must be finite");
  }
  const double bx = beta_ * x;
  const auto base = base_.phases();
  std::vector<double> out(base.size());
  for (std::size_t j = 0; j < out.size(); ++j) {
    // principal-branch angle in (-pi, pi], then one scalar multiply and a
    // reduction back into the canonical range
    const double theta =
        base[j] > std::numbers::pi ? base[j] - kTwoPi : base[j];
    out[j] = reduce_phase(theta * bx);
  }
  return PhasorVector(std::move(out));
}

PhasorVector FpeEncoder::encode_log(std::uint64_t m) const {
  if (m == 0) {
    throw std::invalid_argument("FpeEncoder::encode_log: m must be positive");
  }
  return encode(std::log(static_cast<double>(m)));
}

double select_beta(std::span<const std::uint64_t> primes, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("select_beta: scale must be positive and finite");
  }
  if (primes.size() < 2) {
    throw std::invalid_argument("select_beta: need at least 2 primes");
  }
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < primes.size(); ++i) {
    if (primes[i + 1] <= primes[i]) {
      throw std::invalid_argument(
          "select_beta: primes must be strictly ascending");
    }
    const double gap = std::log(static_cast<double>(primes[i + 1])) -
                       std::log(static_cast<double>(primes[i]));
    if (gap < min_gap) min_gap = gap;
  }
  return scale / min_gap;
}

}  // namespace resofact
