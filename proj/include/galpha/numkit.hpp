#pragma once

// Dense complex linear algebra for the tiny (at most 12x12) matrices that
// appear in one-step amplification analysis.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace galpha {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

inline constexpr std::size_t kMaxDimension = 12;

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols);
  /// Row-major nested initializer, e.g. {{1, 2}, {3, 4}}.
  CMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix diagonal(std::span<const Complex> d);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<const Complex> data() const noexcept { return data_; }

  /// Max absolute row sum.
  double norm_inf() const;
  bool all_finite() const;

  CMatrix operator*(const CMatrix& rhs) const;
  CVector operator*(std::span<const Complex> v) const;
  CMatrix operator-(const CMatrix& rhs) const;
  CMatrix transposed() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

double norm_inf(std::span<const Complex> v);

/// Gaussian elimination with partial pivoting. Throws SingularMatrix when a
/// pivot falls below 1e-14 * ||A||_inf.
CVector solve(const CMatrix& a, std::span<const Complex> b);

/// Solves A X = B for a matrix right-hand side, sharing one factorization.
CMatrix solve(const CMatrix& a, const CMatrix& b);

/// Determinant by LU with partial pivoting; exact zero for singular input.
Complex determinant(const CMatrix& a);

/// All eigenvalues with multiplicity. Householder reduction to Hessenberg
/// form followed by single-shift complex QR with Wilkinson shifts and
/// exceptional shifts on stagnation. Throws NoConvergence after
/// kQrIterationsPerEigenvalue * n sweeps.
std::vector<Complex> eigenvalues(const CMatrix& a);

inline constexpr int kQrIterationsPerEigenvalue = 60;

double spectral_radius(const CMatrix& a);

/// (G_1, ..., G_d): G_j is the sum of all j x j principal minors, so G_1 is
/// the trace and G_d the determinant. Enumerates index subsets directly.
std::vector<Complex> principal_minor_sums(const CMatrix& a);

}  // namespace galpha
