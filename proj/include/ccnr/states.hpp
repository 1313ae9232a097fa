// SPDX-License-Identifier: Apache-2.0
#pragma once

// Bipartite states on C^{d_a} (x) C^{d_b}. Composite index of |i>|k> is
// i * d_b + k throughout.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ccnr/errors.hpp"
#include "ccnr/numkernel.hpp"

namespace ccnr {

/// Acceptance thresholds applied when a matrix is promoted to a state.
struct StateTolerances {
  double hermiticity = 1e-10;  ///< relative, see symmetrize_hermitian
  double psd = 1e-10;          ///< smallest eigenvalue must be >= -psd
  double trace = 1e-10;        ///< |tr - 1|
};

class DensityOperator {
public:
  /// Validates `m` against `tol`, then stores the symmetrized matrix with its
  /// trace renormalized to one.
  static DensityOperator from_matrix(std::size_t dim_a, std::size_t dim_b, ComplexMatrix m,
                                     const StateTolerances& tol = {}) {
    check_shape(dim_a, dim_b, m);
    ComplexMatrix hd = m.adjoint();
    const double asym = max_abs(m - hd);
    if (asym > tol.hermiticity * (1.0 + max_abs(m))) throw InvariantError("hermiticity", asym);
    m += hd;
    m *= 0.5;

    const Complex tr = m.trace();
    const double trace_residual = std::abs(tr - 1.0);
    if (trace_residual > tol.trace) throw InvariantError("unit trace", trace_residual);
    m *= 1.0 / tr.real();

    const double min_eig = hermitian_eigenvalues(m).front();
    if (min_eig < -tol.psd) throw InvariantError("positive semidefinite", min_eig);
    return DensityOperator(dim_a, dim_b, std::move(m));
  }

  /// Shape-checked only. For diagnostics on general (Hermitian or not)
  /// operators, e.g. rank-one |psi><omega|.
  static DensityOperator unchecked(std::size_t dim_a, std::size_t dim_b, ComplexMatrix m) {
    check_shape(dim_a, dim_b, m);
    return DensityOperator(dim_a, dim_b, std::move(m));
  }

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t dim() const noexcept { return dim_a_ * dim_b_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }

  /// Element <(i,k)| rho |(j,l)>.
  const Complex& at(std::size_t i, std::size_t k, std::size_t j, std::size_t l) const {
    return matrix_(i * dim_b_ + k, j * dim_b_ + l);
  }

  /// V rho V^dagger.
  DensityOperator transformed(const ComplexMatrix& v) const {
    return from_matrix(dim_a_, dim_b_, v * matrix_ * v.adjoint());
  }

  /// tr(rho X)
  Complex expectation(const ComplexMatrix& x) const { return (matrix_ * x).trace(); }

private:
  DensityOperator(std::size_t a, std::size_t b, ComplexMatrix m)
      : dim_a_(a), dim_b_(b), matrix_(std::move(m)) {}

  static void check_shape(std::size_t a, std::size_t b, const ComplexMatrix& m) {
    if (a == 0 || b == 0) throw ShapeError("subsystem dimensions must be positive");
    if (m.rows() != a * b || m.cols() != a * b)
      throw ShapeError("density matrix is " + std::to_string(m.rows()) + "x" +
                       std::to_string(m.cols()) + ", dims " + std::to_string(a) + "," +
                       std::to_string(b) + " need " + std::to_string(a * b) + "x" +
                       std::to_string(a * b));
  }

  std::size_t dim_a_;
  std::size_t dim_b_;
  ComplexMatrix matrix_;
};

class PureState {
public:
  static PureState from_amplitudes(std::size_t dim_a, std::size_t dim_b, ComplexVector amps,
                                   double tol = 1e-12) {
    if (dim_a == 0 || dim_b == 0) throw ShapeError("subsystem dimensions must be positive");
    if (amps.size() != dim_a * dim_b)
      throw ShapeError("pure state has " + std::to_string(amps.size()) + " amplitudes, dims need " +
                       std::to_string(dim_a * dim_b));
    const double n = norm(amps);
    if (std::abs(n - 1.0) > tol) throw InvariantError("unit norm", std::abs(n - 1.0));
    for (auto& z : amps) z /= n;
    return PureState(dim_a, dim_b, std::move(amps));
  }

  /// Scales `amps` to unit length.
  static PureState normalized(std::size_t dim_a, std::size_t dim_b, ComplexVector amps) {
    const double n = norm(amps);
    if (n == 0.0) throw DomainError("cannot normalize the zero vector");
    for (auto& z : amps) z /= n;
    return from_amplitudes(dim_a, dim_b, std::move(amps));
  }

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  const ComplexVector& amplitudes() const noexcept { return amps_; }

  /// d_a x d_b matrix c with c(i, k) = <i,k|psi>.
  ComplexMatrix coefficient_matrix() const { return ComplexMatrix(dim_a_, dim_b_, amps_); }

  DensityOperator projector() const {
    return DensityOperator::from_matrix(dim_a_, dim_b_, ComplexMatrix::outer(amps_, amps_));
  }

private:
  PureState(std::size_t a, std::size_t b, ComplexVector v)
      : dim_a_(a), dim_b_(b), amps_(std::move(v)) {}

  std::size_t dim_a_;
  std::size_t dim_b_;
  ComplexVector amps_;
};

/// psi = sum_i sqrt(p_i) |a_i> (x) |b_i>
struct SchmidtForm {
  std::vector<double> coefficients;  ///< p_i, descending
  std::vector<ComplexVector> left_basis;
  std::vector<ComplexVector> right_basis;
};

/// Eigenvalues of a two-qubit Bell-diagonal state.
class BellSpectrum {
public:
  explicit BellSpectrum(std::array<double, 4> lambda) : lambda_(lambda) {
    double sum = 0.0;
    for (double l : lambda_) {
      if (!std::isfinite(l) || l < 0.0)
        throw DomainError("Bell spectrum entries must be nonnegative");
      sum += l;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw DomainError("Bell spectrum must sum to 1, got " + std::to_string(sum));
  }

  const std::array<double, 4>& lambda() const noexcept { return lambda_; }
  double operator[](std::size_t i) const { return lambda_[i]; }
  double max() const { return *std::max_element(lambda_.begin(), lambda_.end()); }
  double min() const { return *std::min_element(lambda_.begin(), lambda_.end()); }

private:
  std::array<double, 4> lambda_;
};

// ---------------------------------------------------------------------------

namespace detail {

inline void require_local_dim(std::size_t d, const char* what) {
  if (d < 2) throw DomainError(std::string(what) + ": local dimension must be at least 2");
}

inline ComplexVector basis_ket(std::size_t dim_a, std::size_t dim_b, std::size_t i,
                               std::size_t k) {
  ComplexVector v(dim_a * dim_b);
  v[i * dim_b + k] = 1.0;
  return v;
}

} // namespace detail

/// Swap operator F |i> (x) |j> = |j> (x) |i>.
inline ComplexMatrix flip_operator(std::size_t d) {
  detail::require_local_dim(d, "flip_operator");
  ComplexMatrix f(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) f(j * d + i, i * d + j) = 1.0;
  return f;
}

/// (1/sqrt d) sum_i |i> (x) |i>
inline PureState max_entangled(std::size_t d) {
  detail::require_local_dim(d, "max_entangled");
  ComplexVector v(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (std::size_t i = 0; i < d; ++i) v[i * d + i] = amp;
  return PureState::from_amplitudes(d, d, std::move(v));
}

/// sum_{ij} |i i><j j|, i.e. d |Psi+><Psi+|.
inline ComplexMatrix fhat_operator(std::size_t d) {
  detail::require_local_dim(d, "fhat_operator");
  ComplexMatrix f(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) f(i * d + i, j * d + j) = 1.0;
  return f;
}

/// U (x) U invariant state with tr(rho F) = f.
inline DensityOperator werner_state(std::size_t d, double f) {
  detail::require_local_dim(d, "werner_state");
  if (!(f >= -1.0 && f <= 1.0)) throw DomainError("werner_state: f must lie in [-1, 1]");
  const double dd = static_cast<double>(d);
  const double norm = dd * dd * dd - dd;
  ComplexMatrix m = flip_operator(d) * Complex((dd * f - 1.0) / norm);
  for (std::size_t i = 0; i < d * d; ++i) m(i, i) += (dd - f) / norm;
  return DensityOperator::from_matrix(d, d, std::move(m));
}

/// (d^2 F - 1)/(d^2 - 1), the weight of |Psi+><Psi+| in the isotropic state.
inline double isotropic_alpha(std::size_t d, double fidelity) {
  const double d2 = static_cast<double>(d * d);
  return (d2 * fidelity - 1.0) / (d2 - 1.0);
}

/// U (x) conj(U) invariant state with <Psi+|rho|Psi+> = F.
inline DensityOperator isotropic_state(std::size_t d, double fidelity) {
  detail::require_local_dim(d, "isotropic_state");
  if (!(fidelity >= 0.0 && fidelity <= 1.0))
    throw DomainError("isotropic_state: F must lie in [0, 1]");
  const double alpha = isotropic_alpha(d, fidelity);
  const double dd = static_cast<double>(d);
  ComplexMatrix m = fhat_operator(d) * Complex(alpha / dd);
  for (std::size_t i = 0; i < d * d; ++i) m(i, i) += (1.0 - alpha) / (dd * dd);
  return DensityOperator::from_matrix(d, d, std::move(m));
}

/// Psi_0 = (|00>+|11>)/sqrt2, Psi_1 = i(|01>+|10>)/sqrt2,
/// Psi_2 = (|10>-|01>)/sqrt2, Psi_3 = i(|00>-|11>)/sqrt2.
inline std::array<PureState, 4> bell_basis() {
  const double h = 1.0 / std::numbers::sqrt2;
  const Complex ih(0.0, h);
  auto make = [](ComplexVector v) { return PureState::from_amplitudes(2, 2, std::move(v)); };
  return {make({h, 0.0, 0.0, h}), make({0.0, ih, ih, 0.0}), make({0.0, -h, h, 0.0}),
          make({ih, 0.0, 0.0, -ih})};
}

inline DensityOperator bell_diagonal_state(const BellSpectrum& s) {
  const auto basis = bell_basis();
  ComplexMatrix m(4, 4);
  for (std::size_t k = 0; k < 4; ++k)
    m += ComplexMatrix::outer(basis[k].amplitudes(), basis[k].amplitudes()) * Complex(s[k]);
  return DensityOperator::from_matrix(2, 2, std::move(m));
}

/// p |00><00| + (1-p) |Phi><Phi| with Phi = (|01>+|10>)/sqrt2.
inline DensityOperator qubit_family(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("qubit_family: p must lie in [0, 1]");
  const double h = 1.0 / std::numbers::sqrt2;
  const ComplexVector phi{0.0, h, h, 0.0};
  const ComplexVector zero_zero = detail::basis_ket(2, 2, 0, 0);
  ComplexMatrix m = ComplexMatrix::outer(zero_zero, zero_zero) * Complex(p) +
                    ComplexMatrix::outer(phi, phi) * Complex(1.0 - p);
  return DensityOperator::from_matrix(2, 2, std::move(m));
}

/// Two-qutrit family (2/7)|Psi+><Psi+| + (alpha/7) sigma_+ + ((5-alpha)/7) sigma_-,
/// sigma_+ = (|01><01| + |12><12| + |20><20|)/3 and sigma_- its flipped partner.
inline DensityOperator qutrit_family(double alpha) {
  if (!(alpha >= 2.0 && alpha <= 5.0))
    throw DomainError("qutrit_family: alpha must lie in [2, 5]");
  const auto psi = max_entangled(3);
  ComplexMatrix m = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()) * Complex(2.0 / 7.0);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t j = (i + 1) % 3;
    m(i * 3 + j, i * 3 + j) += alpha / 21.0;
    m(j * 3 + i, j * 3 + i) += (5.0 - alpha) / 21.0;
  }
  return DensityOperator::from_matrix(3, 3, std::move(m));
}

/// sum_i sqrt(p_i) |i> (x) |i> in the canonical bases.
inline PureState pure_from_schmidt(std::span<const double> p, std::size_t dim_a,
                                   std::size_t dim_b) {
  if (p.empty() || p.size() > std::min(dim_a, dim_b))
    throw DomainError("pure_from_schmidt: need between 1 and min(d_a, d_b) coefficients");
  double sum = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) throw DomainError("pure_from_schmidt: coefficients must be nonnegative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw DomainError("pure_from_schmidt: coefficients must sum to 1");
  ComplexVector v(dim_a * dim_b);
  for (std::size_t i = 0; i < p.size(); ++i) v[i * dim_b + i] = std::sqrt(p[i]);
  return PureState::normalized(dim_a, dim_b, std::move(v));
}

/// Singular system of the coefficient matrix; p_i are the squared singular values.
inline SchmidtForm schmidt_decompose(const PureState& psi) {
  const auto sys = svd(psi.coefficient_matrix());
  SchmidtForm out;
  for (std::size_t k = 0; k < sys.values.size(); ++k) {
    out.coefficients.push_back(sys.values[k] * sys.values[k]);
    out.left_basis.push_back(sys.left.column(k));
    // psi = sum s_k u_k v_k^dagger as a matrix, so the B-side vector is conj(v_k).
    ComplexVector b = sys.right.column(k);
    for (auto& z : b) z = std::conj(z);
    out.right_basis.push_back(std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Twirls: exact projections onto the U(x)U and U(x)conj(U) invariant families.

namespace detail {

inline std::size_t require_symmetric_bipartition(const DensityOperator& s, const char* what) {
  if (s.dim_a() != s.dim_b())
    throw ShapeError(std::string(what) + ": subsystem dimensions differ (" +
                     std::to_string(s.dim_a()) + " vs " + std::to_string(s.dim_b()) + ")");
  return s.dim_a();
}

inline double clamp_rounding(double x, double lo, double hi) {
  constexpr double slack = 1e-9;
  if (x < lo - slack || x > hi + slack)
    throw DomainError("twirl: moment " + std::to_string(x) + " outside the family range");
  return std::clamp(x, lo, hi);
}

} // namespace detail

/// tr(sigma F)
inline double flip_expectation(const DensityOperator& sigma) {
  const std::size_t d = detail::require_symmetric_bipartition(sigma, "flip_expectation");
  Complex s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s += sigma.at(i, j, j, i);
  return s.real();
}

/// <Psi+| sigma |Psi+>
inline double max_entangled_fidelity(const DensityOperator& sigma) {
  const std::size_t d = detail::require_symmetric_bipartition(sigma, "max_entangled_fidelity");
  Complex s = 0.0;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s += sigma.at(i, i, j, j);
  return s.real() / static_cast<double>(d);
}

inline DensityOperator twirl_uu(const DensityOperator& sigma) {
  const std::size_t d = detail::require_symmetric_bipartition(sigma, "twirl_uu");
  return werner_state(d, detail::clamp_rounding(flip_expectation(sigma), -1.0, 1.0));
}

inline DensityOperator twirl_uubar(const DensityOperator& sigma) {
  const std::size_t d = detail::require_symmetric_bipartition(sigma, "twirl_uubar");
  return isotropic_state(d, detail::clamp_rounding(max_entangled_fidelity(sigma), 0.0, 1.0));
}

// ---------------------------------------------------------------------------
// Partial traces

/// tr_A rho, a d_b x d_b matrix.
inline ComplexMatrix partial_trace_a(const DensityOperator& rho) {
  ComplexMatrix r(rho.dim_b(), rho.dim_b());
  for (std::size_t k = 0; k < rho.dim_b(); ++k)
    for (std::size_t l = 0; l < rho.dim_b(); ++l)
      for (std::size_t i = 0; i < rho.dim_a(); ++i) r(k, l) += rho.at(i, k, i, l);
  return r;
}

/// tr_B rho, a d_a x d_a matrix.
inline ComplexMatrix partial_trace_b(const DensityOperator& rho) {
  ComplexMatrix r(rho.dim_a(), rho.dim_a());
  for (std::size_t i = 0; i < rho.dim_a(); ++i)
    for (std::size_t j = 0; j < rho.dim_a(); ++j)
      for (std::size_t k = 0; k < rho.dim_b(); ++k) r(i, j) += rho.at(i, k, j, k);
  return r;
}

// ---------------------------------------------------------------------------
// Seeded generators

inline PureState random_pure(std::size_t dim_a, std::size_t dim_b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto g = random_gaussian_matrix(dim_a * dim_b, 1, rng);
  return PureState::normalized(dim_a, dim_b, g.column(0));
}

/// G G^dagger / tr with G a (d_a d_b) x rank complex Gaussian matrix.
inline DensityOperator random_density(std::size_t dim_a, std::size_t dim_b, std::size_t rank,
                                      std::uint64_t seed) {
  if (rank == 0 || rank > dim_a * dim_b)
    throw DomainError("random_density: rank must lie in [1, d_a d_b]");
  std::mt19937_64 rng(seed);
  const auto g = random_gaussian_matrix(dim_a * dim_b, rank, rng);
  ComplexMatrix m = g * g.adjoint();
  m *= 1.0 / m.trace().real();
  return DensityOperator::from_matrix(dim_a, dim_b, std::move(m));
}

/// Convex mixture of `terms` random pure product states; separable by construction.
inline DensityOperator random_separable(std::size_t dim_a, std::size_t dim_b, std::size_t terms,
                                        std::uint64_t seed) {
  if (terms == 0) throw DomainError("random_separable: need at least one term");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ComplexMatrix m(dim_a * dim_b, dim_a * dim_b);
  double total = 0.0;
  for (std::size_t t = 0; t < terms; ++t) {
    auto a = random_gaussian_matrix(dim_a, 1, rng).column(0);
    auto b = random_gaussian_matrix(dim_b, 1, rng).column(0);
    const double w = unit(rng) + 1e-3;
    const auto v = kron(std::span<const Complex>(a), std::span<const Complex>(b));
    m += ComplexMatrix::outer(v, v) * Complex(w / (norm(a) * norm(a) * norm(b) * norm(b)));
    total += w;
  }
  m *= 1.0 / total;
  return DensityOperator::from_matrix(dim_a, dim_b, std::move(m));
}

} // namespace ccnr
