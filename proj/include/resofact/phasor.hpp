#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "resofact/rng.hpp"

namespace resofact {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Reduce a phase into the canonical range [0, 2*pi).
double reduce_phase(double p);

// Unit-magnitude complex vector (FHRR hypervector), stored as phases in
// [0, 2*pi). The phase representation keeps component magnitudes exactly 1
// and halves the memory of an equivalent complex array; complex values are
// materialized on demand.
class PhasorVector {
 public:
  PhasorVector() = default;

  // Phases are reduced into [0, 2*pi) on construction.
  explicit PhasorVector(std::vector<double> phases);

  // The identity vector: all components 1+0i.
  static PhasorVector ones(std::size_t n);

  std::size_t dim() const noexcept { return phases_.size(); }
  std::span<const double> phases() const noexcept { return phases_; }
  double phase(std::size_t j) const { return phases_[j]; }
  std::complex<double> component(std::size_t j) const {
    return {std::cos(phases_[j]), std::sin(phases_[j])};
  }

  bool operator==(const PhasorVector& other) const = default;

 private:
  std::vector<double> phases_;
};

// Complex vector with unconstrained magnitudes: superpositions and
// intermediate (un-normalized) resonator states. Components must be finite.
class SuperposedVector {
 public:
  SuperposedVector() = default;

  // Throws std::domain_error if any component is NaN or infinite.
  explicit SuperposedVector(std::vector<std::complex<double>> components);

  std::size_t dim() const noexcept { return components_.size(); }
  std::span<const std::complex<double>> components() const noexcept {
    return components_;
  }
  std::complex<double> component(std::size_t j) const { return components_[j]; }

 private:
  std::vector<std::complex<double>> components_;
};

// Materialize a phasor vector as a complex vector.
SuperposedVector to_superposed(const PhasorVector& v);

// Random phasor with phases drawn i.i.d. uniform over (0, 2*pi].
// Throws std::invalid_argument for n == 0.
PhasorVector random_phasor(std::size_t n, Rng& rng);

// Binding: componentwise complex product (phase addition).
PhasorVector bind(const PhasorVector& a, const PhasorVector& b);

// Unbinding: componentwise product with the conjugate of b (phase
// subtraction). Exact inverse of bind up to floating-point rounding.
PhasorVector unbind(const PhasorVector& s, const PhasorVector& b);

// Superposition: componentwise complex sum, no normalization.
// Throws std::invalid_argument on an empty list or mismatched dimensions.
SuperposedVector superpose(std::span<const PhasorVector> vs);
SuperposedVector superpose(std::span<const SuperposedVector> vs);

// Componentwise magnitude normalization f_n(x) = x/|x|. Components with
// |x| <= 1e-300 map to 1+0i so that runs stay deterministic; f_n is
// undefined at zero and this case has negligible probability.
// Throws std::domain_error on NaN/Inf input.
PhasorVector normalize_phasor(const SuperposedVector& v);

// Normalized inner product (1/n) * Re(a^dagger b). For unit phasor inputs
// the value lies in [-1, 1]. Symmetric in its arguments.
double similarity(const PhasorVector& a, const PhasorVector& b);
double similarity(const PhasorVector& a, const SuperposedVector& b);
double similarity(const SuperposedVector& a, const PhasorVector& b);
double similarity(const SuperposedVector& a, const SuperposedVector& b);

// Re(a^dagger b) / (|a| |b|). Equals similarity() when both arguments are
// unit phasor vectors. Throws std::invalid_argument on a zero-norm argument.
double cosine_similarity(const PhasorVector& a, const PhasorVector& b);
double cosine_similarity(const PhasorVector& a, const SuperposedVector& b);
double cosine_similarity(const SuperposedVector& a, const PhasorVector& b);
double cosine_similarity(const SuperposedVector& a, const SuperposedVector& b);

double l2_norm(const SuperposedVector& v);

}  // namespace resofact
