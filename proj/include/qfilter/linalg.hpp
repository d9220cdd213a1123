#pragma once

// Fixed-size complex linear algebra for qubit (2x2) and two-qubit (4x4)
// operators. Everything here is a value type; no heap allocation.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace qfilter {

using Complex = std::complex<double>;

/// Tolerance used by the structural predicates unless a caller overrides it.
inline constexpr double kDefaultTol = 1e-9;

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input that violates a documented precondition or invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An iteration failed to converge, or a result that must be real came back
/// with a significant imaginary part.
class NumericalError : public Error {
 public:
  using Error::Error;
};

template <std::size_t N>
using CVector = std::array<Complex, N>;

template <std::size_t N>
class CMatrix {
  static_assert(N == 2 || N == 4, "only qubit and two-qubit operators are supported");

 public:
  static constexpr std::size_t dim = N;

  CMatrix() = default;

  /// Row-major initialization; the list must hold exactly N*N entries.
  CMatrix(std::initializer_list<Complex> row_major) {
    if (row_major.size() != N * N) {
      throw ValidationError("CMatrix: expected " + std::to_string(N * N) + " entries, got " +
                            std::to_string(row_major.size()));
    }
    std::size_t i = 0;
    for (const Complex& z : row_major) data_[i++] = z;
  }

  static CMatrix identity() {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static CMatrix diagonal(const CVector<N>& d) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  /// |v><w|
  static CMatrix outer(const CVector<N>& v, const CVector<N>& w) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = v[i] * std::conj(w[j]);
    return m;
  }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * N + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * N + c]; }

  Complex trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  CMatrix adjoint() const {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  CMatrix conjugate() const {
    CMatrix m;
    for (std::size_t k = 0; k < N * N; ++k) m.data_[k] = std::conj(data_[k]);
    return m;
  }

  CMatrix transpose() const {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = (*this)(j, i);
    return m;
  }

  /// (M + M^dagger) / 2
  CMatrix hermitian_part() const { return (*this + adjoint()) * 0.5; }

  CVector<N> column(std::size_t c) const {
    CVector<N> v;
    for (std::size_t r = 0; r < N; ++r) v[r] = (*this)(r, c);
    return v;
  }

  void set_column(std::size_t c, const CVector<N>& v) {
    for (std::size_t r = 0; r < N; ++r) (*this)(r, c) = v[r];
  }

  /// Largest |M_ij - conj(M_ji)|.
  double hermiticity_violation() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = i; j < N; ++j)
        worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
    return worst;
  }

  bool is_hermitian(double tol = kDefaultTol) const { return hermiticity_violation() <= tol; }

  double frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : data_) s += std::norm(z);
    return std::sqrt(s);
  }

  CMatrix& operator+=(const CMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
    return *this;
  }
  CMatrix& operator-=(const CMatrix& o) {
    for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
    return *this;
  }
  CMatrix& operator*=(Complex s) {
    for (Complex& z : data_) z *= s;
    return *this;
  }

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
  friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, double s) { return a *= Complex(s); }
  friend CMatrix operator*(double s, CMatrix a) { return a *= Complex(s); }

  friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    CMatrix m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Complex aik = a(i, k);
        for (std::size_t j = 0; j < N; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend CVector<N> operator*(const CMatrix& a, const CVector<N>& v) {
    CVector<N> out{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out[i] += a(i, j) * v[j];
    return out;
  }

  friend bool operator==(const CMatrix&, const CMatrix&) = default;

 private:
  std::array<Complex, N * N> data_{};
};

using Mat2 = CMatrix<2>;
using Mat4 = CMatrix<4>;
using Vec2 = CVector<2>;
using Vec4 = CVector<4>;

/// Largest entrywise |A_ij - B_ij|.
template <std::size_t N>
double max_abs_diff(const CMatrix<N>& a, const CMatrix<N>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

template <std::size_t N>
Complex inner(const CVector<N>& v, const CVector<N>& w) {
  Complex s = 0.0;
  for (std::size_t i = 0; i < N; ++i) s += std::conj(v[i]) * w[i];
  return s;
}

template <std::size_t N>
double norm(const CVector<N>& v) {
  return std::sqrt(std::real(inner(v, v)));
}

/// Pauli matrix sigma_k, k = 0 is the identity.
Mat2 pauli(int k);

/// Kronecker product A (x) B.
Mat4 tensor_product(const Mat2& a, const Mat2& b);

/// Determinant by LU decomposition with partial pivoting.
template <std::size_t N>
Complex determinant(const CMatrix<N>& m);

template <std::size_t N>
struct HermitianEigensystem {
  std::array<double, N> values{};  ///< descending
  CMatrix<N> vectors;              ///< orthonormal eigenvectors as columns
};

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Throws ValidationError when `h` is not Hermitian to `tol`.
template <std::size_t N>
HermitianEigensystem<N> hermitian_eigensystem(const CMatrix<N>& h, double tol = kDefaultTol);

template <std::size_t N>
bool is_psd(const CMatrix<N>& h, double tol = kDefaultTol);

/// All N eigenvalues of an arbitrary complex matrix, with multiplicity and
/// in no particular order. Hessenberg reduction then shifted QR.
template <std::size_t N>
CVector<N> general_eigenvalues(const CMatrix<N>& m);

/// Principal square root of a Hermitian positive semidefinite matrix.
/// Eigenvalues in [-tol, 0) are clamped to zero; anything lower is rejected.
template <std::size_t N>
CMatrix<N> matrix_sqrt_psd(const CMatrix<N>& h, double tol = kDefaultTol);

/// Singular values in descending order, by one-sided Jacobi. Small singular
/// values come out with absolute accuracy on the order of eps * ||m||.
template <std::size_t N>
std::array<double, N> singular_values(const CMatrix<N>& m);

}  // namespace qfilter
