#include "resofact/phasor.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace resofact {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* op) {
  if (a != b) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) +
                                ")");
  }
}

}  // namespace

double reduce_phase(double p) {
  double r = std::fmod(p, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;  // rounding of (negative tiny) + 2*pi
  return r;
}

PhasorVector::PhasorVector(std::vector<double> phases)
    : phases_(std::move(phases)) {
  for (double& p : phases_) {
    if (!std::isfinite(p)) {
      throw std::domain_error("PhasorVector: non-finite phase");
    }
    if (p < 0.0 || p >= kTwoPi) p = reduce_phase(p);
  }
}

PhasorVector PhasorVector::ones(std::size_t n) {
  return PhasorVector(std::vector<double>(n, 0.0));
}

SuperposedVector::SuperposedVector(std::vector<std::complex<double>> components)
    : components_(std::move(components)) {
  for (const auto& c : components_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw std::domain_error("SuperposedVector: non-finite component");
    }
  }
}

SuperposedVector to_superposed(const PhasorVector& v) {
  std::vector<std::complex<double>> out(v.dim());
  for (std::size_t j = 0; j < v.dim(); ++j) out[j] = v.component(j);
  return SuperposedVector(std::move(out));
}

PhasorVector random_phasor(std::size_t n, Rng& rng) {
  if (n == 0) {
    throw std::invalid_argument("random_phasor: dimension must be positive");
  }
  std::vector<double> phases(n);
  for (double& p : phases) p = rng.next_phase();
  return PhasorVector(std::move(phases));  // 2*pi canonicalizes to 0
}

PhasorVector bind(const PhasorVector& a, const PhasorVector& b) {
  require_same_dim(a.dim(), b.dim(), "bind");
  std::vector<double> out(a.dim());
  const auto pa = a.phases();
  const auto pb = b.phases();
  for (std::size_t j = 0; j < out.size(); ++j) {
    double s = pa[j] + pb[j];  // both in [0, 2*pi), so s < 4*pi
    if (s >= kTwoPi) s -= kTwoPi;
    out[j] = s;
  }
  return PhasorVector(std::move(out));
}

PhasorVector unbind(const PhasorVector& s, const PhasorVector& b) {
  require_same_dim(s.dim(), b.dim(), "unbind");
  std::vector<double> out(s.dim());
  const auto ps = s.phases();
  const auto pb = b.phases();
  for (std::size_t j = 0; j < out.size(); ++j) {
    double d = ps[j] - pb[j];
    if (d < 0.0) d += kTwoPi;
    out[j] = d;
  }
  return PhasorVector(std::move(out));
}

namespace {

template <typename V>
SuperposedVector superpose_impl(std::span<const V> vs) {
  if (vs.empty()) {
    throw std::invalid_argument("superpose: empty input list");
  }
  const std::size_t n = vs.front().dim();
  std::vector<std::complex<double>> acc(n, {0.0, 0.0});
  for (const V& v : vs) {
    require_same_dim(n, v.dim(), "superpose");
    for (std::size_t j = 0; j < n; ++j) acc[j] += v.component(j);
  }
  return SuperposedVector(std::move(acc));
}

}  // namespace

SuperposedVector superpose(std::span<const PhasorVector> vs) {
  return superpose_impl(vs);
}

SuperposedVector superpose(std::span<const SuperposedVector> vs) {
  return superpose_impl(vs);
}

PhasorVector normalize_phasor(const SuperposedVector& v) {
  std::vector<double> phases(v.dim());
  const auto comps = v.components();
  for (std::size_t j = 0; j < phases.size(); ++j) {
    const double re = comps[j].real();
    const double im = comps[j].imag();
    if (!std::isfinite(re) || !std::isfinite(im)) {
      throw std::domain_error("normalize_phasor: non-finite component");
    }
    if (std::hypot(re, im) <= 1e-300) {
      phases[j] = 0.0;  // degenerate component maps to 1+0i
    } else {
      double p = std::atan2(im, re);
      if (p < 0.0) p += kTwoPi;
      phases[j] = p;
    }
  }
  return PhasorVector(std::move(phases));
}

double similarity(const PhasorVector& a, const PhasorVector& b) {
  require_same_dim(a.dim(), b.dim(), "similarity");
  const auto pa = a.phases();
  const auto pb = b.phases();
  double acc = 0.0;
  // cos is even, so taking |delta| keeps similarity exactly symmetric.
  for (std::size_t j = 0; j < pa.size(); ++j) {
    acc += std::cos(std::fabs(pb[j] - pa[j]));
  }
  return acc / static_cast<double>(pa.size());
}

double similarity(const PhasorVector& a, const SuperposedVector& b) {
  require_same_dim(a.dim(), b.dim(), "similarity");
  const auto pa = a.phases();
  const auto cb = b.components();
  double acc = 0.0;
  for (std::size_t j = 0; j < pa.size(); ++j) {
    acc += std::cos(pa[j]) * cb[j].real() + std::sin(pa[j]) * cb[j].imag();
  }
  return acc / static_cast<double>(pa.size());
}

double similarity(const SuperposedVector& a, const PhasorVector& b) {
  return similarity(b, a);
}

double similarity(const SuperposedVector& a, const SuperposedVector& b) {
  require_same_dim(a.dim(), b.dim(), "similarity");
  const auto ca = a.components();
  const auto cb = b.components();
  double acc = 0.0;
  for (std::size_t j = 0; j < ca.size(); ++j) {
    acc += ca[j].real() * cb[j].real() + ca[j].imag() * cb[j].imag();
  }
  return acc / static_cast<double>(ca.size());
}

double l2_norm(const SuperposedVector& v) {
  double acc = 0.0;
  for (const auto& c : v.components()) {
    acc += c.real() * c.real() + c.imag() * c.imag();
  }
  return std::sqrt(acc);
}

namespace {

double checked_norm(double norm, const char* op) {
  if (norm <= 0.0) {
    throw std::invalid_argument(std::string(op) + ": zero-norm argument");
  }
  return norm;
}

}  // namespace

double cosine_similarity(const PhasorVector& a, const PhasorVector& b) {
  return similarity(a, b);  // |a| = |b| = sqrt(n) exactly
}

double cosine_similarity(const PhasorVector& a, const SuperposedVector& b) {
  require_same_dim(a.dim(), b.dim(), "cosine_similarity");
  const double n = static_cast<double>(a.dim());
  const double nb = checked_norm(l2_norm(b), "cosine_similarity");
  return similarity(a, b) * n / (std::sqrt(n) * nb);
}

double cosine_similarity(const SuperposedVector& a, const PhasorVector& b) {
  return cosine_similarity(b, a);
}

double cosine_similarity(const SuperposedVector& a, const SuperposedVector& b) {
  require_same_dim(a.dim(), b.dim(), "cosine_similarity");
  const double n = static_cast<double>(a.dim());
  const double na = checked_norm(l2_norm(a), "cosine_similarity");
  const double nb = checked_norm(l2_norm(b), "cosine_similarity");
  return similarity(a, b) * n / (na * nb);
}

}  // namespace resofact
