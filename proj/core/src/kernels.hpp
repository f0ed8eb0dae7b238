// Unchecked probability kernels shared by the public model functions and the
// CH evaluator. Callers validate their inputs first.
#pragma once

#include <cmath>

#include "bellkit/quantum_model.hpp"

namespace bellkit::detail {

struct StateConstants {
  double f_sq;
  double re_f;
  double coherence;
  double norm;  // 1 / (1 + |f|^2)
};

inline StateConstants constants_of(const EntangledState& state) {
  return {state.f_mag * state.f_mag, state.f_mag * std::cos(state.f_phase), state.coherence,
          state.normalization()};
}

// |x + f y|^2 for real x, y with the interference term scaled by coherence.
inline double weighted_norm(const StateConstants& k, double x, double y) {
  return x * x + k.f_sq * y * y + 2.0 * k.coherence * k.re_f * x * y;
}

// Sum over analyser outcomes of transmission products times outcome
// probability, for polarisers only (no detector efficiency).
inline double coincidence_kernel(const StateConstants& k, double par1, double perp1, double par2,
                                 double perp2, double s1, double c1, double s2, double c2) {
  const double sum = par1 * par2 * weighted_norm(k, s1 * s2, c1 * c2) +
                     par1 * perp2 * weighted_norm(k, s1 * c2, -c1 * s2) +
                     perp1 * par2 * weighted_norm(k, c1 * s2, -s1 * c2) +
                     perp1 * perp2 * weighted_norm(k, c1 * c2, s1 * s2);
  return sum * k.norm;
}

inline double marginal_kernel(const StateConstants& k, double par, double perp, double s,
                              double c) {
  const double s_sq = s * s, c_sq = c * c;
  return (par * (s_sq + k.f_sq * c_sq) + perp * (c_sq + k.f_sq * s_sq)) * k.norm;
}

}  // namespace bellkit::detail
