// SPDX-License-Identifier: Apache-2.0
#pragma once

// Realignment rho -> R(rho): the d_a^2 x d_b^2 matrix that pairs the two
// A-indices into a row and the two B-indices into a column,
//
//   R[(i, j), (k, l)] = rho[(i, k), (j, l)].
//
// Product operators X (x) Y go to the rank-one |vec X><vec conj(Y)|, so the
// trace norm of R(rho) is at most 1 on separable states.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "ccnr/errors.hpp"
#include "ccnr/numkernel.hpp"
#include "ccnr/states.hpp"

namespace ccnr {

/// τ values strictly above 1 + kCriterionGuard count as a violation.
inline constexpr double kCriterionGuard = 1e-9;

class RealignedMatrix {
public:
  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

private:
  RealignedMatrix(std::size_t a, std::size_t b, ComplexMatrix m)
      : dim_a_(a), dim_b_(b), matrix_(std::move(m)) {}
  friend RealignedMatrix realign(const DensityOperator& rho);

  std::size_t dim_a_;
  std::size_t dim_b_;
  ComplexMatrix matrix_;
};

/// T = sum_i coefficients[i] left_ops[i] (x) right_ops[i], with {left_ops}
/// and {right_ops} orthonormal in the Hilbert-Schmidt inner product.
struct OperatorSchmidt {
  std::vector<double> coefficients;
  std::vector<ComplexMatrix> left_ops;
  std::vector<ComplexMatrix> right_ops;

  double coefficient_sum() const {
    return std::accumulate(coefficients.begin(), coefficients.end(), 0.0);
  }

  ComplexMatrix reconstruct() const {
    ComplexMatrix t(left_ops.front().rows() * right_ops.front().rows(),
                    left_ops.front().cols() * right_ops.front().cols());
    for (std::size_t i = 0; i < coefficients.size(); ++i)
      t += kron(left_ops[i], right_ops[i]) * Complex(coefficients[i]);
    return t;
  }
};

inline RealignedMatrix realign(const DensityOperator& rho) {
  const std::size_t da = rho.dim_a();
  const std::size_t db = rho.dim_b();
  ComplexMatrix r(da * da, db * db);
  for (std::size_t i = 0; i < da; ++i)
    for (std::size_t j = 0; j < da; ++j)
      for (std::size_t k = 0; k < db; ++k)
        for (std::size_t l = 0; l < db; ++l) r(i * da + j, k * db + l) = rho.at(i, k, j, l);
  return RealignedMatrix(da, db, std::move(r));
}

inline OperatorSchmidt operator_schmidt(const DensityOperator& rho) {
  const auto r = realign(rho);
  const auto sys = svd(r.matrix());
  const std::size_t da = rho.dim_a();
  const std::size_t db = rho.dim_b();
  OperatorSchmidt out;
  out.coefficients = sys.values;
  for (std::size_t k = 0; k < sys.values.size(); ++k) {
    ComplexMatrix e(da, da);
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) e(i, j) = sys.left(i * da + j, k);
    ComplexMatrix f(db, db);
    for (std::size_t a = 0; a < db; ++a)
      for (std::size_t b = 0; b < db; ++b) f(a, b) = std::conj(sys.right(a * db + b, k));
    out.left_ops.push_back(std::move(e));
    out.right_ops.push_back(std::move(f));
  }
  return out;
}

/// Trace norm of the realigned matrix. At most 1 for every separable state.
inline double ccnr_tau(const DensityOperator& rho) { return trace_norm(realign(rho).matrix()); }

inline bool violates_ccnr(double tau) { return tau > 1.0 + kCriterionGuard; }

/// tr R(rho) = d <Psi+|rho|Psi+>; needs d_a = d_b.
inline Complex realign_trace(const DensityOperator& rho) {
  if (rho.dim_a() != rho.dim_b())
    throw ShapeError("realign_trace: subsystem dimensions differ");
  return realign(rho).matrix().trace();
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail {

inline void require_werner_args(std::size_t d, double f, const char* what) {
  if (d < 2) throw DomainError(std::string(what) + ": d must be at least 2");
  if (!(f >= -1.0 && f <= 1.0)) throw DomainError(std::string(what) + ": f must lie in [-1, 1]");
}

inline void require_isotropic_args(std::size_t d, double fidelity, const char* what) {
  if (d < 2) throw DomainError(std::string(what) + ": d must be at least 2");
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw DomainError(std::string(what) + ": F must lie in [0, 1]");
}

} // namespace detail

/// 2/d - f for f <= 1/d, f above.
inline double tau_werner_closed(std::size_t d, double f) {
  detail::require_werner_args(d, f, "tau_werner_closed");
  const double dd = static_cast<double>(d);
  return f <= 1.0 / dd ? 2.0 / dd - f : f;
}

/// dF for F >= 1/d^2, 2/d - dF below.
inline double tau_isotropic_closed(std::size_t d, double fidelity) {
  detail::require_isotropic_args(d, fidelity, "tau_isotropic_closed");
  const double dd = static_cast<double>(d);
  return fidelity >= 1.0 / (dd * dd) ? dd * fidelity : 2.0 / dd - dd * fidelity;
}

inline double tau_bell_diagonal_closed(const BellSpectrum& s) {
  const double l0 = s[0], l1 = s[1], l2 = s[2], l3 = s[3];
  const double d03 = std::abs(l0 - l3);
  const double d12 = std::abs(l1 - l2);
  return 0.5 * (1.0 + std::abs(l0 + l3 - l1 - l2) + d12 + d03 + std::abs(d03 - d12));
}

inline double tau_qubit_family_closed(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("tau_qubit_family_closed: p must lie in [0, 1]");
  const double q = 1.0 - p;
  const double base = p * p / 2.0 + q * q / 4.0;
  const double cross = (p / 2.0) * std::sqrt(p * p + q * q);
  // base - cross vanishes at p = 1 and can round to a tiny negative there.
  return q + std::sqrt(base + cross) + std::sqrt(std::max(0.0, base - cross));
}

inline double tau_qutrit_family_closed(double alpha) {
  if (!(alpha >= 2.0 && alpha <= 5.0))
    throw DomainError("tau_qutrit_family_closed: alpha must lie in [2, 5]");
  return 19.0 / 21.0 + (2.0 / 21.0) * std::sqrt(19.0 - 15.0 * alpha + 3.0 * alpha * alpha);
}

} // namespace ccnr
