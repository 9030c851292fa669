#pragma once

#include <cstdint>
#include <span>

#include "resofact/phasor.hpp"
#include "resofact/rng.hpp"

namespace resofact {

// Fractional power encoding: a scalar x maps to the base vector raised
// componentwise to the power beta*x, i.e. component j of z(x) is
// exp(i * theta_j * beta * x). Binding two encodings yields the encoding of
// the sum, which is what makes log-encoded integers multiply under binding.
//
// Fractional powers are taken on the principal branch: the exponentiated
// angle theta_j is the representative in (-pi, pi]. For a uniform base
// vector this yields the sinc similarity kernel sin(pi*beta*d)/(pi*beta*d)
// in the distance d = x - y, with its first zero at d = 1/beta.
class FpeEncoder {
 public:
  // Throws std::invalid_argument unless beta is positive and finite.
  FpeEncoder(PhasorVector base, double beta);

  static FpeEncoder make_random(std::size_t n, double beta, Rng& rng);

  // z^(beta*x). Phases are reduced mod 2*pi after the scalar multiply.
  // Throws std::domain_error for non-finite x. encode(0) is exactly the
  // all-ones vector.
  PhasorVector encode(double x) const;

  // z(log m) with the natural log taken in double precision.
  // Throws std::invalid_argument for m == 0.
  PhasorVector encode_log(std::uint64_t m) const;

  double beta() const noexcept { return beta_; }
  std::size_t dim() const noexcept { return base_.dim(); }
  const PhasorVector& base() const noexcept { return base_; }

 private:
  PhasorVector base_;
  double beta_;
};

// Bandwidth selection: scale / min_i(log p_{i+1} - log p_i) over adjacent
// pairs of the supplied list. The scan covers every adjacent gap; the
// minimum gap need not sit at either end of the range.
// Throws std::invalid_argument for fewer than 2 primes or a list that is
// not strictly ascending.
double select_beta(std::span<const std::uint64_t> primes, double scale = 1e4);

}  // namespace resofact
