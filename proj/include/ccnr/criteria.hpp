// SPDX-License-Identifier: Apache-2.0
#pragma once

// Necessary separability criteria side by side. The realignment criterion,
// PPT and the reduction criterion are mutually incomparable on the families
// in this library, so the report keeps each verdict separate.

#include <algorithm>
#include <optional>
#include <string_view>

#include "ccnr/crossnorm.hpp"
#include "ccnr/families.hpp"
#include "ccnr/numkernel.hpp"
#include "ccnr/realign.hpp"
#include "ccnr/states.hpp"

namespace ccnr {

/// Eigenvalue floors below -kEigenvalueGuard count as a violation.
inline constexpr double kEigenvalueGuard = 1e-9;

enum class Verdict { separable_certified, entangled_certified, undecided };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::separable_certified: return "separable_certified";
    case Verdict::entangled_certified: return "entangled_certified";
    case Verdict::undecided: return "undecided";
  }
  return "unknown";
}

struct CriteriaReport {
  double tau = 0.0;
  bool tau_violated = false;
  double ppt_floor = 0.0;
  bool ppt_violated = false;
  double reduction_floor = 0.0;
  bool reduction_violated = false;
  std::optional<double> tau_closed;
  std::optional<GammaValue> gamma_closed;
  Verdict verdict = Verdict::undecided;
};

/// Transpose on the B factor: entry ((i,k),(j,l)) of the result is rho[(i,l),(j,k)].
inline ComplexMatrix partial_transpose_b(const ComplexMatrix& m, std::size_t dim_a,
                                         std::size_t dim_b) {
  if (m.rows() != dim_a * dim_b || m.cols() != dim_a * dim_b)
    throw ShapeError("partial_transpose_b: matrix does not match dims");
  ComplexMatrix t(m.rows(), m.cols());
  for (std::size_t i = 0; i < dim_a; ++i)
    for (std::size_t j = 0; j < dim_a; ++j)
      for (std::size_t k = 0; k < dim_b; ++k)
        for (std::size_t l = 0; l < dim_b; ++l)
          t(i * dim_b + k, j * dim_b + l) = m(i * dim_b + l, j * dim_b + k);
  return t;
}

inline double ppt_min_eigenvalue(const DensityOperator& rho) {
  return hermitian_eigenvalues(partial_transpose_b(rho.matrix(), rho.dim_a(), rho.dim_b()))
      .front();
}

/// Smallest eigenvalue of rho_A (x) 1 - rho and of 1 (x) rho_B - rho.
inline double reduction_min_eigenvalue(const DensityOperator& rho) {
  const auto id_a = ComplexMatrix::identity(rho.dim_a());
  const auto id_b = ComplexMatrix::identity(rho.dim_b());
  const double floor_a =
      hermitian_eigenvalues(kron(partial_trace_b(rho), id_b) - rho.matrix()).front();
  const double floor_b =
      hermitian_eigenvalues(kron(id_a, partial_trace_a(rho)) - rho.matrix()).front();
  return std::min(floor_a, floor_b);
}

inline bool violates_eigenvalue_floor(double floor) { return floor < -kEigenvalueGuard; }

/// Any violated criterion certifies entanglement; only a closed-form gamma of
/// exactly one certifies separability.
inline CriteriaReport full_report(const DensityOperator& rho,
                                  const std::optional<FamilyDescriptor>& closed_form = {}) {
  CriteriaReport r;
  r.tau = ccnr_tau(rho);
  r.tau_violated = violates_ccnr(r.tau);
  r.ppt_floor = ppt_min_eigenvalue(rho);
  r.ppt_violated = violates_eigenvalue_floor(r.ppt_floor);
  r.reduction_floor = reduction_min_eigenvalue(rho);
  r.reduction_violated = violates_eigenvalue_floor(r.reduction_floor);
  if (closed_form) {
    r.tau_closed = closed_tau(*closed_form);
    r.gamma_closed = closed_gamma(*closed_form);
  }

  if (r.tau_violated || r.ppt_violated || r.reduction_violated)
    r.verdict = Verdict::entangled_certified;
  else if (r.gamma_closed && is_separable_closed(*r.gamma_closed))
    r.verdict = Verdict::separable_certified;
  else
    r.verdict = Verdict::undecided;
  return r;
}

} // namespace ccnr
