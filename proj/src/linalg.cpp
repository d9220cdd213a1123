#include "qfilter/linalg.hpp"

#include <limits>
#include <numeric>
#include <sstream>

namespace qfilter {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Parameters of the unitary U = diag(1, conj(e)) * [[c, s], [-s, c]] that
// diagonalizes the Hermitian block [[app, b], [conj(b), aqq]] as U^dagger B U.
struct JacobiRotation {
  double c;
  double s;
  Complex e;  // b / |b|
};

JacobiRotation jacobi_rotation(double app, double aqq, Complex b) {
  const double mag = std::abs(b);
  const double tau = (aqq - app) / (2.0 * mag);
  double t;
  if (std::abs(tau) > 1e150) {
    t = 0.5 / tau;
  } else {
    t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  }
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  return {c, t * c, b / mag};
}

// Columns p, q of X replaced by those of X * U.
template <std::size_t N>
void rotate_columns(CMatrix<N>& x, std::size_t p, std::size_t q, const JacobiRotation& r) {
  const Complex ce = std::conj(r.e);
  for (std::size_t k = 0; k < N; ++k) {
    const Complex xp = x(k, p);
    const Complex xq = x(k, q);
    x(k, p) = r.c * xp - r.s * ce * xq;
    x(k, q) = r.s * xp + r.c * ce * xq;
  }
}

// Rows p, q of X replaced by those of U^dagger * X.
template <std::size_t N>
void rotate_rows(CMatrix<N>& x, std::size_t p, std::size_t q, const JacobiRotation& r) {
  for (std::size_t k = 0; k < N; ++k) {
    const Complex xp = x(p, k);
    const Complex xq = x(q, k);
    x(p, k) = r.c * xp - r.s * r.e * xq;
    x(q, k) = r.s * xp + r.c * r.e * xq;
  }
}

// Fix the phase so the first component of largest magnitude is real positive.
template <std::size_t N>
void canonicalize_phase(CVector<N>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < N; ++i)
    if (std::abs(v[i]) > std::abs(v[best]) * (1.0 + 1e-12)) best = i;
  if (std::abs(v[best]) == 0.0) return;
  const Complex phase = std::conj(v[best]) / std::abs(v[best]);
  for (Complex& z : v) z *= phase;
  v[best] = std::abs(v[best]);
}

// Eigenvalues of [[a, b], [c, d]].
std::pair<Complex, Complex> eigenvalues_2x2(Complex a, Complex b, Complex c, Complex d) {
  const Complex mean = 0.5 * (a + d);
  const Complex half_diff = 0.5 * (a - d);
  const Complex disc = std::sqrt(half_diff * half_diff + b * c);
  const Complex det = a * d - b * c;
  Complex e1 = mean + disc;
  const Complex alt = mean - disc;
  if (std::abs(alt) > std::abs(e1)) e1 = alt;
  if (std::abs(e1) == 0.0) return {0.0, 0.0};
  return {e1, det / e1};
}

}  // namespace

Mat2 pauli(int k) {
  using namespace std::complex_literals;
  switch (k) {
    case 0:
      return {1.0, 0.0, 0.0, 1.0};
    case 1:
      return {0.0, 1.0, 1.0, 0.0};
    case 2:
      return {0.0, -1i, 1i, 0.0};
    case 3:
      return {1.0, 0.0, 0.0, -1.0};
    default:
      throw ValidationError("pauli: index " + std::to_string(k) + " outside 0..3");
  }
}

Mat4 tensor_product(const Mat2& a, const Mat2& b) {
  Mat4 m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

template <std::size_t N>
Complex determinant(const CMatrix<N>& m) {
  CMatrix<N> a = m;
  Complex det = 1.0;
  for (std::size_t k = 0; k < N; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < N; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    if (std::abs(a(pivot, k)) == 0.0) return 0.0;
    if (pivot != k) {
      for (std::size_t j = 0; j < N; ++j) std::swap(a(k, j), a(pivot, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < N; ++i) {
      const Complex f = a(i, k) / a(k, k);
      for (std::size_t j = k; j < N; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

template <std::size_t N>
HermitianEigensystem<N> hermitian_eigensystem(const CMatrix<N>& h, double tol) {
  const double violation = h.hermiticity_violation();
  if (violation > tol) {
    std::ostringstream msg;
    msg << "hermitian_eigensystem: matrix is not Hermitian (max |H_ij - conj(H_ji)| = "
        << violation << ", tolerance " << tol << ")";
    throw ValidationError(msg.str());
  }

  CMatrix<N> a = h.hermitian_part();
  CMatrix<N> v = CMatrix<N>::identity();
  const double scale = a.frobenius_norm();

  auto off_norm = [&a] {
    double s = 0.0;
    for (std::size_t p = 0; p < N; ++p)
      for (std::size_t q = p + 1; q < N; ++q) s += std::norm(a(p, q));
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 64;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    const double off = off_norm();
    if (off == 0.0 || off <= 1e-17 * scale) break;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const Complex b = a(p, q);
        if (std::abs(b) <= std::numeric_limits<double>::min()) continue;
        const JacobiRotation r = jacobi_rotation(a(p, p).real(), a(q, q).real(), b);
        rotate_columns(a, p, q, r);
        rotate_rows(a, p, q, r);
        rotate_columns(v, p, q, r);
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
      }
    }
  }
  if (sweep == kMaxSweeps && off_norm() > 1e-12 * scale) {
    throw NumericalError("hermitian_eigensystem: Jacobi sweeps did not converge");
  }

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  HermitianEigensystem<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    CVector<N> col = v.column(order[k]);
    canonicalize_phase(col);
    out.vectors.set_column(k, col);
  }
  return out;
}

template <std::size_t N>
bool is_psd(const CMatrix<N>& h, double tol) {
  if (!h.is_hermitian(tol)) return false;
  return hermitian_eigensystem(h, tol).values[N - 1] >= -tol;
}

template <std::size_t N>
CVector<N> general_eigenvalues(const CMatrix<N>& m) {
  CMatrix<N> a = m;

  // Householder reduction to upper Hessenberg form.
  for (std::size_t k = 0; k + 2 < N; ++k) {
    CVector<N> v{};
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < N; ++i) {
      v[i] = a(i, k);
      alpha += std::norm(v[i]);
    }
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    const double lead = std::abs(v[k + 1]);
    const Complex phase = lead == 0.0 ? Complex(1.0) : v[k + 1] / lead;
    v[k + 1] += phase * alpha;
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < N; ++i) vnorm2 += std::norm(v[i]);
    if (vnorm2 == 0.0) continue;
    // a <- (I - 2 v v^dagger / |v|^2) a (I - 2 v v^dagger / |v|^2)
    for (std::size_t j = 0; j < N; ++j) {
      Complex dot = 0.0;
      for (std::size_t i = k + 1; i < N; ++i) dot += std::conj(v[i]) * a(i, j);
      dot *= 2.0 / vnorm2;
      for (std::size_t i = k + 1; i < N; ++i) a(i, j) -= v[i] * dot;
    }
    for (std::size_t i = 0; i < N; ++i) {
      Complex dot = 0.0;
      for (std::size_t j = k + 1; j < N; ++j) dot += a(i, j) * v[j];
      dot *= 2.0 / vnorm2;
      for (std::size_t j = k + 1; j < N; ++j) a(i, j) -= dot * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < N; ++i) a(i, k) = 0.0;
  }

  CVector<N> eig{};
  const double scale = std::max(a.frobenius_norm(), std::numeric_limits<double>::min());
  int hi = static_cast<int>(N) - 1;
  int iter = 0;
  int total = 0;
  constexpr int kMaxIterations = 60 * static_cast<int>(N);

  std::array<Complex, N> cs{};
  std::array<Complex, N> ss{};

  while (hi >= 0) {
    if (hi == 0) {
      eig[0] = a(0, 0);
      break;
    }
    int l = hi;
    for (; l > 0; --l) {
      double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
      if (s == 0.0) s = scale;
      if (std::abs(a(l, l - 1)) <= kEps * s) {
        a(l, l - 1) = 0.0;
        break;
      }
    }
    if (l == hi) {
      eig[hi] = a(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (l == hi - 1) {
      const auto [e1, e2] = eigenvalues_2x2(a(hi - 1, hi - 1), a(hi - 1, hi), a(hi, hi - 1), a(hi, hi));
      eig[hi - 1] = e1;
      eig[hi] = e2;
      hi -= 2;
      iter = 0;
      continue;
    }
    if (++total > kMaxIterations) {
      throw NumericalError("general_eigenvalues: shifted QR iteration did not converge");
    }
    ++iter;

    Complex mu;
    if (iter % 10 == 0) {
      mu = a(hi, hi) + 1.5 * std::abs(a(hi, hi - 1));
    } else {
      const auto [e1, e2] = eigenvalues_2x2(a(hi - 1, hi - 1), a(hi - 1, hi), a(hi, hi - 1), a(hi, hi));
      mu = std::abs(e1 - a(hi, hi)) < std::abs(e2 - a(hi, hi)) ? e1 : e2;
    }

    const auto lo = static_cast<std::size_t>(l);
    const auto top = static_cast<std::size_t>(hi);
    for (std::size_t k = lo; k <= top; ++k) a(k, k) -= mu;
    for (std::size_t k = lo; k < top; ++k) {
      const Complex x = a(k, k);
      const Complex y = a(k + 1, k);
      const double r = std::hypot(std::abs(x), std::abs(y));
      Complex c = 1.0;
      Complex s = 0.0;
      if (r != 0.0) {
        if (std::abs(x) == 0.0) {
          c = 0.0;
          s = 1.0;
        } else {
          c = std::abs(x) / r;
          s = (x / std::abs(x)) * std::conj(y) / r;
        }
      }
      cs[k] = c;
      ss[k] = s;
      for (std::size_t j = k; j <= top; ++j) {
        const Complex u = a(k, j);
        const Complex w = a(k + 1, j);
        a(k, j) = c * u + s * w;
        a(k + 1, j) = -std::conj(s) * u + c * w;
      }
    }
    for (std::size_t k = lo; k < top; ++k) {
      const Complex c = cs[k];
      const Complex s = ss[k];
      for (std::size_t i = lo; i <= top; ++i) {
        const Complex u = a(i, k);
        const Complex w = a(i, k + 1);
        a(i, k) = u * c + w * std::conj(s);
        a(i, k + 1) = -u * s + w * c;
      }
    }
    for (std::size_t k = lo; k <= top; ++k) a(k, k) += mu;
  }
  return eig;
}

template <std::size_t N>
CMatrix<N> matrix_sqrt_psd(const CMatrix<N>& h, double tol) {
  const HermitianEigensystem<N> es = hermitian_eigensystem(h, tol);
  if (es.values[N - 1] < -tol) {
    std::ostringstream msg;
    msg << "matrix_sqrt_psd: matrix is not PSD (minimum eigenvalue " << es.values[N - 1]
        << ", tolerance " << tol << ")";
    throw ValidationError(msg.str());
  }
  CMatrix<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    const double root = std::sqrt(std::max(es.values[k], 0.0));
    if (root == 0.0) continue;
    const CVector<N> v = es.vectors.column(k);
    out += CMatrix<N>::outer(v, v) * root;
  }
  return out.hermitian_part();
}

template <std::size_t N>
std::array<double, N> singular_values(const CMatrix<N>& m) {
  CMatrix<N> a = m;
  constexpr int kMaxSweeps = 64;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t p = 0; p < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        double alpha = 0.0;
        double beta = 0.0;
        Complex gamma = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          alpha += std::norm(a(k, p));
          beta += std::norm(a(k, q));
          gamma += std::conj(a(k, p)) * a(k, q);
        }
        if (std::abs(gamma) <= std::numeric_limits<double>::min() ||
            std::abs(gamma) <= 4.0 * kEps * std::sqrt(alpha * beta)) {
          continue;
        }
        converged = false;
        rotate_columns(a, p, q, jacobi_rotation(alpha, beta, gamma));
      }
    }
  }
  if (!converged) throw NumericalError("singular_values: one-sided Jacobi did not converge");

  std::array<double, N> sv{};
  for (std::size_t k = 0; k < N; ++k) sv[k] = norm(a.column(k));
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

#define QFILTER_INSTANTIATE(N)                                                              \
  template Complex determinant<N>(const CMatrix<N>&);                                       \
  template HermitianEigensystem<N> hermitian_eigensystem<N>(const CMatrix<N>&, double);     \
  template bool is_psd<N>(const CMatrix<N>&, double);                                       \
  template CVector<N> general_eigenvalues<N>(const CMatrix<N>&);                            \
  template CMatrix<N> matrix_sqrt_psd<N>(const CMatrix<N>&, double);                        \
  template std::array<double, N> singular_values<N>(const CMatrix<N>&);

QFILTER_INSTANTIATE(2)
QFILTER_INSTANTIATE(4)

#undef QFILTER_INSTANTIATE

}  // namespace qfilter
