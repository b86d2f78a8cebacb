#include "galpha/numkit.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <utility>

#include <fmt/format.h>

#include "galpha/error.hpp"

namespace galpha {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularMatrix: return "SingularMatrix";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionCap: return "DimensionCap";
    case ErrorCode::OutOfTable: return "OutOfTable";
    case ErrorCode::VariantUnsupported: return "VariantUnsupported";
    case ErrorCode::PoleAtRho: return "PoleAtRho";
    case ErrorCode::SingularAtT: return "SingularAtT";
    case ErrorCode::DegenerateAlphaM: return "DegenerateAlphaM";
    case ErrorCode::DegenerateParams: return "DegenerateParams";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::SolveFailed: return "SolveFailed";
    case ErrorCode::StepSingular: return "StepSingular";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::AllAtRoundoff: return "AllAtRoundoff";
    case ErrorCode::NoRoot: return "NoRoot";
  }
  return "Unknown";
}

CMatrix::CMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {
  if (rows == 0 || cols == 0)
    throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  if (rows_ == 0 || cols_ == 0)
    throw Error(ErrorCode::InvalidArgument, "matrix dimensions must be positive");
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_)
      throw Error(ErrorCode::DimensionMismatch, "ragged matrix initializer");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const Complex> d) {
  CMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

double CMatrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double sum = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) sum += std::abs((*this)(r, c));
    best = std::max(best, sum);
  }
  return best;
}

bool CMatrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
  });
}

CMatrix CMatrix::operator*(const CMatrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
  CMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex a = (*this)(i, k);
      if (a == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

CVector CMatrix::operator*(std::span<const Complex> v) const {
  if (cols_ != v.size())
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
  CVector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex sum{};
    for (std::size_t j = 0; j < cols_; ++j) sum += (*this)(i, j) * v[j];
    out[i] = sum;
  }
  return out;
}

CMatrix CMatrix::operator-(const CMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix difference shape mismatch");
  CMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

CMatrix CMatrix::transposed() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

double norm_inf(std::span<const Complex> v) {
  double best = 0.0;
  for (const auto& z : v) best = std::max(best, std::abs(z));
  return best;
}

namespace {

constexpr double kPivotTolerance = 1e-14;

void require_square(const CMatrix& a, const char* what) {
  if (!a.square())
    throw Error(ErrorCode::DimensionMismatch, fmt::format("{}: matrix is not square", what));
}

// In-place LU with partial pivoting; returns the permutation sign or 0 when
// an exact zero column is hit.
struct Lu {
  CMatrix lu;
  std::vector<std::size_t> perm;
  double min_pivot = std::numeric_limits<double>::infinity();
  int sign = 1;
};

Lu factor(const CMatrix& a) {
  const std::size_t n = a.rows();
  Lu f{a, std::vector<std::size_t>(n)};
  for (std::size_t i = 0; i < n; ++i) f.perm[i] = i;
  CMatrix& m = f.lu;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(m(k, k));
    for (std::size_t r = k + 1; r < n; ++r)
      if (std::abs(m(r, k)) > best) {
        best = std::abs(m(r, k));
        piv = r;
      }
    f.min_pivot = std::min(f.min_pivot, best);
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(k, c), m(piv, c));
      std::swap(f.perm[k], f.perm[piv]);
      f.sign = -f.sign;
    }
    if (best == 0.0) continue;
    for (std::size_t r = k + 1; r < n; ++r) {
      const Complex l = m(r, k) / m(k, k);
      m(r, k) = l;
      for (std::size_t c = k + 1; c < n; ++c) m(r, c) -= l * m(k, c);
    }
  }
  return f;
}

void check_pivots(const Lu& f, double scale) {
  if (!(f.min_pivot > kPivotTolerance * scale))
    throw Error(ErrorCode::SingularMatrix,
                fmt::format("pivot {:.3e} below tolerance relative to norm {:.3e}",
                            f.min_pivot, scale));
}

CVector lu_solve(const Lu& f, std::span<const Complex> b) {
  const std::size_t n = f.lu.rows();
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) {
    Complex s = b[f.perm[i]];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    Complex s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s / f.lu(i, i);
  }
  return x;
}

}  // namespace

CVector solve(const CMatrix& a, std::span<const Complex> b) {
  require_square(a, "solve");
  if (a.rows() != b.size())
    throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side length mismatch");
  const Lu f = factor(a);
  check_pivots(f, a.norm_inf());
  return lu_solve(f, b);
}

CMatrix solve(const CMatrix& a, const CMatrix& b) {
  require_square(a, "solve");
  if (a.rows() != b.rows())
    throw Error(ErrorCode::DimensionMismatch, "solve: right-hand side rows mismatch");
  const Lu f = factor(a);
  check_pivots(f, a.norm_inf());
  CMatrix x(b.rows(), b.cols());
  CVector col(b.rows());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
    const CVector xj = lu_solve(f, col);
    for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = xj[i];
  }
  return x;
}

Complex determinant(const CMatrix& a) {
  require_square(a, "determinant");
  const Lu f = factor(a);
  Complex det = static_cast<double>(f.sign);
  for (std::size_t i = 0; i < a.rows(); ++i) det *= f.lu(i, i);
  return det;
}

namespace {

// Reduces h to upper Hessenberg form by Householder reflections (similarity).
void hessenberg(CMatrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  CVector v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double xnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm += std::norm(h(i, k));
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const Complex x0 = h(k + 1, k);
    const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
    const Complex alpha = -phase * xnorm;
    double vnorm = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) {
      v[i] = h(i, k) - (i == k + 1 ? alpha : Complex{});
      vnorm += std::norm(v[i]);
    }
    if (vnorm == 0.0) continue;
    vnorm = std::sqrt(vnorm);
    for (std::size_t i = k + 1; i < n; ++i) v[i] /= vnorm;
    // H <- (I - 2vv*) H
    for (std::size_t c = k; c < n; ++c) {
      Complex s{};
      for (std::size_t i = k + 1; i < n; ++i) s += std::conj(v[i]) * h(i, c);
      for (std::size_t i = k + 1; i < n; ++i) h(i, c) -= 2.0 * v[i] * s;
    }
    // H <- H (I - 2vv*)
    for (std::size_t r = 0; r < n; ++r) {
      Complex s{};
      for (std::size_t i = k + 1; i < n; ++i) s += h(r, i) * v[i];
      for (std::size_t i = k + 1; i < n; ++i) h(r, i) -= 2.0 * s * std::conj(v[i]);
    }
    for (std::size_t i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

struct Givens {
  double c;
  Complex s;
};

// Unitary [[c, s], [-conj(s), c]] mapping (x, y) to (r, 0).
Givens make_givens(Complex x, Complex y) {
  const double ax = std::abs(x);
  const double r = std::hypot(ax, std::abs(y));
  if (r == 0.0) return {1.0, Complex{}};
  if (ax == 0.0) return {0.0, Complex{1.0}};
  return {ax / r, (x / ax) * std::conj(y) / r};
}

// Eigenvalue of [[a, b], [c, d]] closest to d.
Complex wilkinson_shift(Complex a, Complex b, Complex c, Complex d) {
  const Complex half_tr = 0.5 * (a + d);
  const Complex det = a * d - b * c;
  const Complex disc = std::sqrt(half_tr * half_tr - det);
  const Complex l1 = half_tr + disc;
  const Complex l2 = half_tr - disc;
  return std::abs(l1 - d) < std::abs(l2 - d) ? l1 : l2;
}

}  // namespace

std::vector<Complex> eigenvalues(const CMatrix& a) {
  require_square(a, "eigenvalues");
  const std::size_t n = a.rows();
  if (n > kMaxDimension)
    throw Error(ErrorCode::DimensionCap,
                fmt::format("eigenvalues: dimension {} exceeds cap {}", n, kMaxDimension));
  if (!a.all_finite())
    throw Error(ErrorCode::InvalidArgument, "eigenvalues: non-finite entry");

  CMatrix h = a;
  hessenberg(h);
  std::vector<Complex> eig(n);
  const double eps = std::numeric_limits<double>::epsilon();
  const double hnorm = std::max(h.norm_inf(), std::numeric_limits<double>::min());

  int sweeps_left = kQrIterationsPerEigenvalue * static_cast<int>(n);
  std::size_t hi = n - 1;
  int iter = 0;
  while (true) {
    if (hi == 0) {
      eig[0] = h(0, 0);
      break;
    }
    std::size_t lo = hi;
    while (lo > 0) {
      double scale = std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo));
      if (scale == 0.0) scale = hnorm;
      if (std::abs(h(lo, lo - 1)) <= eps * scale) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      eig[hi] = h(hi, hi);
      --hi;
      iter = 0;
      continue;
    }
    if (--sweeps_left < 0)
      throw Error(ErrorCode::NoConvergence,
                  fmt::format("eigenvalues: QR did not converge within {} sweeps",
                              kQrIterationsPerEigenvalue * n));
    ++iter;

    Complex shift;
    if (iter % 10 == 0) {
      // Exceptional shift breaks cycles of the Wilkinson shift.
      shift = h(hi, hi) + Complex(std::abs(h(hi, hi - 1).real()), std::abs(h(hi, hi - 1).imag())) *
                              (iter % 20 == 0 ? 1.5 : 0.75);
    } else {
      shift = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
    }

    // Implicit single-shift QR sweep on the active block [lo, hi].
    for (std::size_t k = lo; k < hi; ++k) {
      Complex x, y;
      if (k == lo) {
        x = h(k, k) - shift;
        y = h(k + 1, k);
      } else {
        x = h(k, k - 1);
        y = h(k + 1, k - 1);
      }
      const Givens g = make_givens(x, y);
      const std::size_t c0 = k == lo ? lo : k - 1;
      for (std::size_t c = c0; c <= hi; ++c) {
        const Complex p = h(k, c);
        const Complex q = h(k + 1, c);
        h(k, c) = g.c * p + g.s * q;
        h(k + 1, c) = -std::conj(g.s) * p + g.c * q;
      }
      if (k != lo) h(k + 1, k - 1) = 0.0;
      const std::size_t r1 = std::min(k + 2, hi);
      for (std::size_t r = lo; r <= r1; ++r) {
        const Complex p = h(r, k);
        const Complex q = h(r, k + 1);
        h(r, k) = p * g.c + q * std::conj(g.s);
        h(r, k + 1) = -p * g.s + q * g.c;
      }
    }
  }
  return eig;
}

double spectral_radius(const CMatrix& a) {
  double r = 0.0;
  for (const auto& z : eigenvalues(a)) r = std::max(r, std::abs(z));
  return r;
}

std::vector<Complex> principal_minor_sums(const CMatrix& a) {
  require_square(a, "principal_minor_sums");
  const std::size_t n = a.rows();
  if (n > kMaxDimension)
    throw Error(ErrorCode::DimensionCap,
                fmt::format("principal_minor_sums: dimension {} exceeds cap {}", n,
                            kMaxDimension));
  std::vector<Complex> sums(n);
  std::vector<std::size_t> idx;
  idx.reserve(n);
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    idx.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const std::size_t k = idx.size();
    CMatrix sub(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) sub(i, j) = a(idx[i], idx[j]);
    sums[k - 1] += determinant(sub);
  }
  return sums;
}

}  // namespace galpha
