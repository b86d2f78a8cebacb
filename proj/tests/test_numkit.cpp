#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "galpha/amplification.hpp"
#include "galpha/error.hpp"
#include "galpha/numkit.hpp"
#include "oracles.hpp"

using namespace galpha;

namespace {

CMatrix random_matrix(std::mt19937_64& rng, std::size_t n, double diag_boost = 0.0) {
  std::normal_distribution<double> nd;
  CMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = Complex(nd(rng), nd(rng));
  for (std::size_t i = 0; i < n; ++i) a(i, i) += diag_boost;
  return a;
}

oracle::Dense dense(const CMatrix& a) {
  oracle::Dense d(a.rows(), std::vector<Complex>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) d[i][j] = a(i, j);
  return d;
}

bool has_code(ErrorCode code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

}  // namespace

TEST_SUITE("numkit") {

TEST_CASE("solve on small hand-checked systems") {
  const CVector x = solve(CMatrix::identity(3), CVector{1.0, 2.0, 3.0});
  CHECK(x == CVector{1.0, 2.0, 3.0});

  const CVector d = solve(CMatrix{{2.0, 0.0}, {0.0, 4.0}}, CVector{2.0, 4.0});
  CHECK(std::abs(d[0] - 1.0) < 1e-15);
  CHECK(std::abs(d[1] - 1.0) < 1e-15);

  const CVector u = solve(CMatrix{{1.0, 1.0}, {0.0, 1.0}}, CVector{3.0, 1.0});
  CHECK(std::abs(u[0] - 2.0) < 1e-15);
  CHECK(std::abs(u[1] - 1.0) < 1e-15);
}

TEST_CASE("solve pivots past a zero leading entry") {
  const CVector x = solve(CMatrix{{0.0, 1.0}, {1.0, 0.0}}, CVector{5.0, 7.0});
  CHECK(std::abs(x[0] - 7.0) < 1e-15);
  CHECK(std::abs(x[1] - 5.0) < 1e-15);
}

TEST_CASE("solve rejects singular and mismatched input") {
  CHECK(has_code(ErrorCode::SingularMatrix,
                 [] { solve(CMatrix{{1.0, 2.0}, {2.0, 4.0}}, CVector{1.0, 1.0}); }));
  CHECK(has_code(ErrorCode::DimensionMismatch,
                 [] { solve(CMatrix::identity(2), CVector{1.0, 1.0, 1.0}); }));
}

TEST_CASE("solve residual on random well-conditioned matrices") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(trial % 12);
    const CMatrix a = random_matrix(rng, n, 3.0 * static_cast<double>(n));
    CVector b(n);
    for (auto& v : b) v = Complex(nd(rng), nd(rng));
    const CVector x = solve(a, b);
    const CVector ax = a * x;
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) r = std::max(r, std::abs(ax[i] - b[i]));
    CHECK(r <= 1e-12 * (1.0 + norm_inf(b)));
  }
}

TEST_CASE("matrix right-hand side matches column solves") {
  std::mt19937_64 rng(5);
  const CMatrix a = random_matrix(rng, 4, 6.0);
  const CMatrix b = random_matrix(rng, 4);
  const CMatrix x = solve(a, b);
  const CMatrix r = a * x - b;
  CHECK(r.norm_inf() < 1e-12);
}

TEST_CASE("determinant against cofactor expansion") {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 5; ++n) {
    const CMatrix a = random_matrix(rng, n);
    const Complex ref = oracle::laplace_det(dense(a));
    CHECK(std::abs(determinant(a) - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
  }
  CHECK(determinant(CMatrix{{1.0, 2.0}, {2.0, 4.0}}) == Complex(0.0));
}

TEST_CASE("eigenvalues of diagonal and rotation matrices") {
  const std::vector<Complex> d = eigenvalues(CMatrix{{2.0, 0.0}, {0.0, 3.0}});
  CHECK(oracle::same_multiset(d, {2.0, 3.0}, 1e-12));
  const std::vector<Complex> r = eigenvalues(CMatrix{{0.0, 1.0}, {-1.0, 0.0}});
  CHECK(oracle::same_multiset(r, {Complex(0, 1), Complex(0, -1)}, 1e-12));
}

TEST_CASE("T -> 0 limit matrix at the region corner has eigenvalue 1") {
  const SchemeParams s = make_scheme(3, 7.0 / 12.0, 0.5);
  const std::vector<Complex> e = eigenvalues(limit_matrix_zero(s));
  const auto nearest = std::min_element(e.begin(), e.end(), [](Complex a, Complex b) {
    return std::abs(a - 1.0) < std::abs(b - 1.0);
  });
  CHECK(std::abs(*nearest - 1.0) < 1e-12);
}

TEST_CASE("eigenvalue residual contract via cofactor determinant") {
  std::mt19937_64 rng(23);
  for (std::size_t n = 1; n <= 6; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const CMatrix a = random_matrix(rng, n);
      const double scale = std::pow(a.norm_inf(), static_cast<double>(n));
      for (const Complex& mu : eigenvalues(a))
        CHECK(std::abs(oracle::laplace_det(oracle::shifted(dense(a), mu))) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("eigenvalues survive a symmetric permutation") {
  std::mt19937_64 rng(29);
  for (std::size_t n : {3u, 5u, 8u, 12u}) {
    const CMatrix a = random_matrix(rng, n);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    CMatrix b(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) b(i, j) = a(perm[i], perm[j]);
    CHECK(oracle::same_multiset(eigenvalues(a), eigenvalues(b), 1e-8));
  }
}

TEST_CASE("eigenvalues of a triangular matrix are its diagonal") {
  CMatrix a = CMatrix::identity(12);
  for (std::size_t i = 0; i < 12; ++i) {
    a(i, i) = Complex(static_cast<double>(i) - 5.5, 0.25 * static_cast<double>(i));
    for (std::size_t j = i + 1; j < 12; ++j) a(i, j) = 0.3;
  }
  std::vector<Complex> diag;
  for (std::size_t i = 0; i < 12; ++i) diag.push_back(a(i, i));
  CHECK(oracle::same_multiset(eigenvalues(a), diag, 1e-8));
}

TEST_CASE("dimension cap") {
  CHECK(has_code(ErrorCode::DimensionCap, [] { eigenvalues(CMatrix::identity(13)); }));
  CHECK(has_code(ErrorCode::DimensionCap, [] { principal_minor_sums(CMatrix::identity(13)); }));
}

TEST_CASE("principal minor sums, hand-checked") {
  const std::vector<Complex> id = principal_minor_sums(CMatrix::identity(3));
  CHECK(id == std::vector<Complex>{3.0, 3.0, 1.0});

  const Complex a(2.0, 1.0), b(-0.5, 3.0);
  const std::vector<Complex> d = principal_minor_sums(CMatrix{{a, 0.0}, {0.0, b}});
  CHECK(std::abs(d[0] - (a + b)) < 1e-15);
  CHECK(std::abs(d[1] - a * b) < 1e-15);

  // det(A - mu I) = -mu^3 + 9 mu^2 - 24 mu + 18, expanded by hand.
  const std::vector<Complex> m =
      principal_minor_sums(CMatrix{{2.0, 1.0, 0.0}, {1.0, 3.0, 1.0}, {0.0, 1.0, 4.0}});
  CHECK(std::abs(m[0] - 9.0) < 1e-12);
  CHECK(std::abs(m[1] - 24.0) < 1e-12);
  CHECK(std::abs(m[2] - 18.0) < 1e-12);
}

TEST_CASE("principal minor sums are the characteristic coefficients") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> nd;
  for (std::size_t n = 1; n <= 6; ++n) {
    const CMatrix a = random_matrix(rng, n);
    const std::vector<Complex> g = principal_minor_sums(a);
    for (int k = 0; k < 10; ++k) {
      const Complex mu(nd(rng), nd(rng));
      // det(mu I - A) = mu^n - G1 mu^(n-1) + G2 mu^(n-2) - ...
      Complex poly = std::pow(mu, static_cast<int>(n));
      double sign = -1.0;
      for (std::size_t j = 1; j <= n; ++j, sign = -sign)
        poly += sign * g[j - 1] * std::pow(mu, static_cast<int>(n - j));
      const Complex ref = oracle::laplace_det(oracle::shifted(dense(a), mu)) *
                          ((n % 2 == 0) ? 1.0 : -1.0);
      CHECK(std::abs(poly - ref) <= 1e-9 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST_CASE("spectral radius and norms") {
  CHECK(spectral_radius(CMatrix{{0.0, 2.0}, {-2.0, 0.0}}) == doctest::Approx(2.0));
  CHECK(CMatrix{{1.0, -2.0}, {3.0, 0.5}}.norm_inf() == doctest::Approx(3.5));
  CHECK(norm_inf(CVector{Complex(3.0, 4.0), 1.0}) == doctest::Approx(5.0));
}

}  // TEST_SUITE
