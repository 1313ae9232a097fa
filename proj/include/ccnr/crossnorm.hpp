// SPDX-License-Identifier: Apache-2.0
#pragma once

// Closed forms for the greatest cross norm ||.||_gamma. A density operator is
// separable exactly when its gamma value is 1, and gamma - 1 bounds the
// robustness of entanglement from below. No general evaluator exists here:
// gamma is an infimum over all decompositions and is only available for the
// rank-one case and the symmetric families below. For arbitrary states the
// realignment trace norm (ccnr_tau) is a lower bound.
//
// For Werner and isotropic states the robustness bound is attained, so
// robustness_lower_bound is the exact robustness for those families.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string_view>
#include <vector>

#include "ccnr/errors.hpp"
#include "ccnr/realign.hpp"
#include "ccnr/states.hpp"

namespace ccnr {

enum class GammaFamily { pure, werner, isotropic, bell_diagonal, rank_one };

inline std::string_view to_string(GammaFamily f) {
  switch (f) {
    case GammaFamily::pure: return "pure";
    case GammaFamily::werner: return "werner";
    case GammaFamily::isotropic: return "isotropic";
    case GammaFamily::bell_diagonal: return "bell_diagonal";
    case GammaFamily::rank_one: return "rank_one";
  }
  return "unknown";
}

struct GammaValue {
  double value;
  GammaFamily family;
};

inline constexpr double kGammaSeparableTolerance = 1e-12;

namespace detail {

inline double sqrt_sum(const std::vector<double>& p) {
  double s = 0.0;
  for (double x : p) s += std::sqrt(std::max(0.0, x));
  return s;
}

} // namespace detail

/// ||psi><omega|| = (sum sqrt p_i)(sum sqrt q_j) over the two Schmidt spectra.
inline double gamma_rank_one(const PureState& psi, const PureState& omega) {
  if (psi.dim_a() != omega.dim_a() || psi.dim_b() != omega.dim_b())
    throw ShapeError("gamma_rank_one: states live on different spaces");
  return detail::sqrt_sum(schmidt_decompose(psi).coefficients) *
         detail::sqrt_sum(schmidt_decompose(omega).coefficients);
}

inline GammaValue gamma_pure(const PureState& psi) {
  const double s = detail::sqrt_sum(schmidt_decompose(psi).coefficients);
  return {s * s, GammaFamily::pure};
}

inline GammaValue gamma_werner_closed(std::size_t d, double f) {
  detail::require_werner_args(d, f, "gamma_werner_closed");
  return {f >= 0.0 ? 1.0 : 1.0 - f, GammaFamily::werner};
}

inline GammaValue gamma_isotropic_closed(std::size_t d, double fidelity) {
  detail::require_isotropic_args(d, fidelity, "gamma_isotropic_closed");
  const double dd = static_cast<double>(d);
  return {fidelity <= 1.0 / dd ? 1.0 : dd * fidelity, GammaFamily::isotropic};
}

inline GammaValue gamma_bell_diagonal_closed(const BellSpectrum& s) {
  const double m = s.max();
  return {m > 0.5 ? 2.0 * m : 1.0, GammaFamily::bell_diagonal};
}

inline double robustness_lower_bound(const GammaValue& gamma) {
  if (gamma.value < 1.0 - kGammaSeparableTolerance)
    throw DomainError("robustness_lower_bound: gamma below 1");
  return std::max(0.0, gamma.value - 1.0);
}

/// Exact robustness of a pure state, (sum sqrt p_i)^2 - 1.
inline double robustness_pure_exact(const PureState& psi) {
  return gamma_pure(psi).value - 1.0;
}

inline bool is_separable_closed(const GammaValue& gamma) {
  return gamma.value <= 1.0 + kGammaSeparableTolerance;
}

} // namespace ccnr
