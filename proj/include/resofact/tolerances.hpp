#pragma once

namespace resofact {

// Central numeric tolerances.
//
// kAlgebraicTol covers identities that involve only phase addition and
// subtraction (bind/unbind round trips, associativity); these hold to a few
// ulps in double precision.
//
// kBetaScaledTol covers identities routed through a bandwidth multiply.
// With beta around 1.5e9 the products beta*log(p) reach ~2e10 rad, so a
// single rounding step can move a phase by ~3e-6 rad; similarities of
// beta-scaled encodings are therefore only trusted to 1e-4.
inline constexpr double kAlgebraicTol = 1e-12;
inline constexpr double kBetaScaledTol = 1e-4;

// Rounding model for the log-FPE homomorphism: similarity of
// bind(encode_log a, encode_log b) against encode_log(a*b) is at least
// 1 - beta_scaled_sim_tol(beta).
inline constexpr double beta_scaled_sim_tol(double beta) {
  const double scaled = beta * 5e-15;
  return scaled > 1e-9 ? scaled : 1e-9;
}

}  // namespace resofact
