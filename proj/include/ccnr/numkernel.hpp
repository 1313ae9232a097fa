// SPDX-License-Identifier: Apache-2.0
#pragma once

// Dense complex linear algebra used by every other part of the library.
// Sizes here are small (a 5x5 bipartite state realigns to a 25x25 matrix),
// so everything is plain row-major storage and Jacobi-type solvers that are
// accurate to working precision rather than fast.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ccnr/errors.hpp"

namespace ccnr {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kHermiticityTolerance = 1e-10;

class ComplexMatrix {
public:
  ComplexMatrix() = default;

  ComplexMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(checked_size(rows, cols)) {}

  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != checked_size(rows, cols))
      throw ShapeError("entry count " + std::to_string(entries_.size()) +
                       " does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    for (const auto& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw DomainError("matrix entries must be finite");
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
  }

  /// |u><v|
  static ComplexMatrix outer(std::span<const Complex> u, std::span<const Complex> v) {
    ComplexMatrix m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
      for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return entries_[i * cols_ + j];
  }

  std::span<Complex> entries() noexcept { return entries_; }
  std::span<const Complex> entries() const noexcept { return entries_; }

  ComplexVector column(std::size_t j) const {
    ComplexVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  void set_column(std::size_t j, std::span<const Complex> values) {
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = std::conj((*this)(i, j));
    return t;
  }

  ComplexMatrix transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  ComplexMatrix conjugate() const {
    ComplexMatrix t = *this;
    for (auto& z : t.entries_) z = std::conj(z);
    return t;
  }

  Complex trace() const {
    require_square("trace");
    Complex s = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) s += (*this)(i, i);
    return s;
  }

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& z : entries_) z *= s;
    return *this;
  }

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_)
      throw ShapeError("matrix product: inner dimensions " + std::to_string(a.cols_) +
                       " and " + std::to_string(b.rows_) + " differ");
    ComplexMatrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Complex aik = a(i, k);
        if (aik == Complex{}) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

  friend ComplexVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
    if (a.cols_ != v.size()) throw ShapeError("matrix-vector product: size mismatch");
    ComplexVector r(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < a.cols_; ++j) r[i] += a(i, j) * v[j];
    return r;
  }

  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

  void require_square(const char* what) const {
    if (!is_square())
      throw ShapeError(std::string(what) + ": matrix is " + std::to_string(rows_) + "x" +
                       std::to_string(cols_) + ", expected square");
  }

private:
  static std::size_t checked_size(std::size_t rows, std::size_t cols) {
    if (rows == 0 || cols == 0) throw ShapeError("matrix dimensions must be positive");
    if (rows > std::numeric_limits<std::size_t>::max() / cols / sizeof(Complex))
      throw ShapeError("matrix dimensions overflow");
    return rows * cols;
  }

  void require_same_shape(const ComplexMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw ShapeError("operands have different shapes");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> entries_;
};

// ---------------------------------------------------------------------------
// Vector helpers

/// <u|v>, antilinear in the first argument.
inline Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
  if (u.size() != v.size()) throw ShapeError("inner product: size mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

inline double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s);
}

/// Largest entry modulus.
inline double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

// ---------------------------------------------------------------------------
// Products and norms

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  constexpr auto kMax = std::numeric_limits<std::size_t>::max();
  if (a.rows() > kMax / b.rows() || a.cols() > kMax / b.cols())
    throw ShapeError("kron: dimension product overflows");
  ComplexMatrix r(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return r;
}

inline ComplexVector kron(std::span<const Complex> u, std::span<const Complex> v) {
  ComplexVector r(u.size() * v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t k = 0; k < v.size(); ++k) r[i * v.size() + k] = u[i] * v[k];
  return r;
}

inline double hs_norm(const ComplexMatrix& a) { return norm(a.entries()); }

// ---------------------------------------------------------------------------
// Hermitian eigensystem (cyclic complex Jacobi)

struct EigenSystem {
  std::vector<double> values;  ///< ascending
  ComplexMatrix vectors;       ///< column k belongs to values[k]
};

namespace detail {

/// Unitary 2x2 rotation that zeroes the (p,q) entry of the Hermitian block
/// [[alpha, g], [conj(g), beta]]. Acting on a pair of columns (x_p, x_q):
///   x_p' = c x_p - s e^{-i phi} x_q,   x_q' = s x_p + c e^{-i phi} x_q
struct JacobiRotation {
  double c = 1.0;
  double s = 0.0;
  Complex phase_conj = 1.0;  // e^{-i phi}

  static JacobiRotation make(double alpha, double beta, Complex g) {
    const double ag = std::abs(g);
    JacobiRotation r;
    r.phase_conj = std::conj(g) / ag;
    const double theta = (beta - alpha) / (2.0 * ag);
    double t;
    if (std::abs(theta) > 1e150)
      t = 0.5 / theta;
    else
      t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    r.c = 1.0 / std::sqrt(t * t + 1.0);
    r.s = t * r.c;
    return r;
  }

  void apply_columns(ComplexMatrix& m, std::size_t p, std::size_t q) const {
    for (std::size_t i = 0; i < m.rows(); ++i) {
      const Complex xp = m(i, p);
      const Complex yq = phase_conj * m(i, q);
      m(i, p) = c * xp - s * yq;
      m(i, q) = s * xp + c * yq;
    }
  }

  // m <- J^dagger m
  void apply_rows_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q) const {
    const Complex phase = std::conj(phase_conj);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Complex xp = m(p, j);
      const Complex yq = phase * m(q, j);
      m(p, j) = c * xp - s * yq;
      m(q, j) = s * xp + c * yq;
    }
  }
};

/// Modified Gram-Schmidt on the columns of `m`, in place. Columns flagged in
/// `replace` (or that turn out numerically dependent) are swapped for the
/// canonical basis vector with the largest component orthogonal to the
/// accepted columns.
inline void orthonormalize_columns(ComplexMatrix& m, std::vector<bool> replace = {}) {
  const std::size_t n = m.rows();
  replace.resize(m.cols(), false);
  auto project_out = [&](ComplexVector& v, std::size_t upto) {
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t k = 0; k < upto; ++k) {
        if (replace[k]) continue;
        ComplexVector col = m.column(k);
        const Complex ov = inner(col, v);
        for (std::size_t i = 0; i < n; ++i) v[i] -= ov * col[i];
      }
  };
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (replace[j]) continue;
    ComplexVector v = m.column(j);
    const double before = norm(v);
    project_out(v, j);
    const double after = norm(v);
    if (before == 0.0 || after < 1e-8 * before) {
      replace[j] = true;
      continue;
    }
    for (auto& z : v) z /= after;
    m.set_column(j, v);
  }
  // Completion pass: accepted columns are final, fill the rest in order.
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (!replace[j]) continue;
    ComplexVector best;
    double best_norm = -1.0;
    for (std::size_t e = 0; e < n; ++e) {
      ComplexVector v(n);
      v[e] = 1.0;
      for (int pass = 0; pass < 2; ++pass)
        for (std::size_t k = 0; k < m.cols(); ++k) {
          if (replace[k]) continue;
          ComplexVector col = m.column(k);
          const Complex ov = inner(col, v);
          for (std::size_t i = 0; i < n; ++i) v[i] -= ov * col[i];
        }
      const double nv = norm(v);
      if (nv > best_norm) {
        best_norm = nv;
        best = std::move(v);
      }
    }
    for (auto& z : best) z /= best_norm;
    m.set_column(j, best);
    replace[j] = false;
  }
}

} // namespace detail

/// Throws SymmetryError unless ||h - h^dagger||_max <= tol (1 + ||h||_max);
/// returns the symmetrized matrix (h + h^dagger)/2.
inline ComplexMatrix symmetrize_hermitian(const ComplexMatrix& h,
                                          double tol = kHermiticityTolerance) {
  h.require_square("hermitian_eigensystem");
  ComplexMatrix hd = h.adjoint();
  const double asym = max_abs(h - hd);
  if (asym > tol * (1.0 + max_abs(h)))
    throw SymmetryError("matrix is not Hermitian: ||h - h^dagger|| = " + std::to_string(asym));
  ComplexMatrix s = h + hd;
  s *= 0.5;
  return s;
}

inline EigenSystem hermitian_eigensystem(const ComplexMatrix& h,
                                         double tol = kHermiticityTolerance) {
  ComplexMatrix a = symmetrize_hermitian(h, tol);
  const std::size_t n = a.rows();
  ComplexMatrix v = ComplexMatrix::identity(n);

  const double scale = hs_norm(a);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int sweep = 0; sweep < 100 && scale > 0.0; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= eps * scale) break;

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const Complex g = a(p, q);
        if (std::abs(g) <= std::numeric_limits<double>::min()) continue;
        const auto rot =
            detail::JacobiRotation::make(a(p, p).real(), a(q, q).real(), g);
        rot.apply_columns(a, p, q);
        rot.apply_rows_adjoint(a, p, q);
        rot.apply_columns(v, p, q);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() < a(y, y).real();
  });

  EigenSystem es{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) es.vectors(i, k) = v(i, order[k]);
  }
  return es;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& h,
                                                 double tol = kHermiticityTolerance) {
  return hermitian_eigensystem(h, tol).values;
}

// ---------------------------------------------------------------------------
// Singular value decomposition (one-sided Jacobi)

/// a = U diag(values) V^dagger with U (rows x k), V (cols x k), k = min(rows, cols).
/// Columns of U and V are orthonormal; values descend.
struct SingularSystem {
  ComplexMatrix left;
  std::vector<double> values;
  ComplexMatrix right;
};

/// One-sided Jacobi: rotates the columns of `a` until they are mutually
/// orthogonal, which diagonalizes a^dagger a without ever forming it.
/// Working on `a` directly keeps small singular values accurate to
/// eps * ||a|| instead of sqrt(eps) * ||a||.
inline SingularSystem svd(const ComplexMatrix& a) {
  if (a.rows() < a.cols()) {
    SingularSystem t = svd(a.adjoint());
    return {std::move(t.right), std::move(t.values), std::move(t.left)};
  }
  const std::size_t n = a.cols();
  ComplexMatrix w = a;
  ComplexMatrix v = ComplexMatrix::identity(n);
  constexpr double eps = std::numeric_limits<double>::epsilon();

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0;
        Complex g = 0.0;
        for (std::size_t i = 0; i < w.rows(); ++i) {
          alpha += std::norm(w(i, p));
          beta += std::norm(w(i, q));
          g += std::conj(w(i, p)) * w(i, q);
        }
        if (std::abs(g) <= eps * std::sqrt(alpha * beta) ||
            std::abs(g) <= std::numeric_limits<double>::min())
          continue;
        rotated = true;
        const auto rot = detail::JacobiRotation::make(alpha, beta, g);
        rot.apply_columns(w, p, q);
        rot.apply_columns(v, p, q);
      }
    if (!rotated) break;
  }

  std::vector<double> sigma(n);
  for (std::size_t j = 0; j < n; ++j) sigma[j] = norm(w.column(j));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  SingularSystem out{ComplexMatrix(a.rows(), n), std::vector<double>(n), ComplexMatrix(n, n)};
  const double cutoff = (n > 0 ? sigma[order[0]] : 0.0) * eps * static_cast<double>(a.rows());
  std::vector<bool> degenerate(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t j = order[k];
    out.values[k] = sigma[j];
    for (std::size_t i = 0; i < n; ++i) out.right(i, k) = v(i, j);
    if (sigma[j] <= cutoff || sigma[j] == 0.0) {
      degenerate[k] = true;
      continue;
    }
    for (std::size_t i = 0; i < a.rows(); ++i) out.left(i, k) = w(i, j) / sigma[j];
  }
  detail::orthonormalize_columns(out.left, degenerate);
  return out;
}

inline std::vector<double> singular_values(const ComplexMatrix& a) { return svd(a).values; }

/// Schatten-1 norm.
inline double trace_norm(const ComplexMatrix& a) {
  const auto s = singular_values(a);
  return std::accumulate(s.begin(), s.end(), 0.0);
}

// ---------------------------------------------------------------------------
// Determinants

inline Complex determinant(const ComplexMatrix& a) {
  a.require_square("determinant");
  ComplexMatrix lu = a;
  const std::size_t n = a.rows();
  Complex det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (lu(piv, k) == Complex{}) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      det = -det;
    }
    det *= lu(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex m = lu(i, k) / lu(k, k);
      if (m == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= m * lu(k, j);
    }
  }
  return det;
}

/// det(J + diag(a)) with J the all-ones matrix, as a_1...a_n (1 + sum 1/a_k).
inline Complex ferrers_determinant(std::span<const Complex> a) {
  if (a.empty()) throw DomainError("ferrers_determinant: need at least one coefficient");
  Complex prod = 1.0;
  Complex recip = 1.0;
  for (const auto& ak : a) {
    if (ak == Complex{}) throw DomainError("ferrers_determinant: coefficients must be nonzero");
    prod *= ak;
    recip += 1.0 / ak;
  }
  return prod * recip;
}

// ---------------------------------------------------------------------------
// Random generators for property tests

inline ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols,
                                            std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (auto& z : g.entries()) {
    const double re = normal(rng);
    const double im = normal(rng);
    z = Complex(re, im);
  }
  return g;
}

/// Haar-distributed unitary: Gram-Schmidt of a complex Gaussian matrix.
inline ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  ComplexMatrix u = random_gaussian_matrix(n, n, rng);
  detail::orthonormalize_columns(u);
  return u;
}

} // namespace ccnr
