#pragma once

#include <staleperc/core.hpp>

#include <cmath>
#include <cstdint>
#include <utility>

namespace staleperc {

/// Expected weighted-mistake bound after A rounds:
///   S R^2 / gamma^2 + sqrt(S A V) / gamma.
inline double theorem1_bound(double S, double radius, double margin, std::int64_t horizon, double V) {
  if (!(margin > 0.0)) throw ContractError("theorem1_bound: margin must be positive");
  const double g2 = margin * margin;
  return S * radius * radius / g2 + std::sqrt(S * static_cast<double>(horizon) * V) / margin;
}

struct StabilizationBounds {
  double hit = 0.0;   // bound on E[T_hit]
  double stab = 0.0;  // bound on E[T_stab]
};

/// Noiseless stabilization bounds: hit = S R^2 / (alpha0 p_min gamma^2) and
/// stab = (tau + 1) * hit.
inline StabilizationBounds theorem2_bounds(double S, double radius, double margin, double alpha0, double p_min,
                                           int tau) {
  if (!(alpha0 > 0.0)) throw ContractError("theorem2_bounds: alpha_0 must be positive");
  if (!(p_min > 0.0)) throw ContractError("theorem2_bounds: p_min must be positive");
  if (!(margin > 0.0)) throw ContractError("theorem2_bounds: margin must be positive");
  const double hit = S * radius * radius / (alpha0 * p_min * margin * margin);
  return {hit, static_cast<double>(tau + 1) * hit};
}

}  // namespace staleperc
