#pragma once

// One-step matrices of the generalized-alpha family applied to the scalar
// test equation u' + lambda u = 0 with T = lambda * tau. The state is the
// tau-scaled derivative stack (U, tau U', ..., tau^{p-1} U^{(p-1)}) and one
// step reads L U_{n+1} = R U_n, so G = L^{-1} R.

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "galpha/numkit.hpp"
#include "galpha/schemes.hpp"

namespace galpha {

/// Row-major L and R in a caller-chosen scalar type. Parameters use Real so
/// the same construction serves double and extended-precision callers.
template <class Scalar>
struct OneStepMatrices {
  std::size_t p = 0;
  std::vector<Scalar> L;
  std::vector<Scalar> R;

  Scalar& l(std::size_t i, std::size_t j) { return L[i * p + j]; }
  Scalar& r(std::size_t i, std::size_t j) { return R[i * p + j]; }
};

template <class Scalar, class Real>
OneStepMatrices<Scalar> one_step_matrices(int order, const Real& alpha_m, const Real& alpha_f,
                                          std::span<const Real> gammas, const Scalar& T) {
  const auto p = static_cast<std::size_t>(order);
  OneStepMatrices<Scalar> m;
  m.p = p;
  m.L.assign(p * p, Scalar(0));
  m.R.assign(p * p, Scalar(0));

  std::vector<Real> fact(p + 1, Real(1));
  for (std::size_t i = 1; i <= p; ++i) fact[i] = fact[i - 1] * Real(static_cast<int>(i));

  // Taylor ladder rows: level i carries gamma_{p-1-i} on the top-derivative jump.
  for (std::size_t i = 0; i + 1 < p; ++i) {
    const std::size_t span_len = p - 1 - i;
    const Real& g = gammas[span_len - 1];
    m.l(i, i) = Scalar(1);
    m.l(i, p - 1) = Scalar(-g / fact[span_len]);
    for (std::size_t j = i; j + 1 < p; ++j) m.r(i, j) = Scalar(Real(1) / fact[j - i]);
    m.r(i, p - 1) = Scalar((Real(1) - g) / fact[span_len]);
  }

  // Consistency row: tau * V^{alpha_m} = -T * U^{alpha_f}.
  const std::size_t last = p - 1;
  const Real& kfact = fact[p - 2];
  m.l(last, p - 2) += Scalar(alpha_f / kfact) * T;
  m.l(last, p - 1) += Scalar(alpha_m / kfact);
  m.r(last, 0) -= T;
  for (std::size_t j = 1; j < p; ++j) m.r(last, j) -= Scalar(Real(1) / fact[j - 1]);
  for (std::size_t j = 1; j + 1 < p; ++j) m.r(last, j) -= T / Scalar(fact[j]);
  m.r(last, p - 2) += Scalar(alpha_f / kfact) * T;
  m.r(last, p - 1) += Scalar(alpha_m / kfact);
  return m;
}

struct AmplificationPair {
  CMatrix L;
  CMatrix R;
  Complex T;
};

AmplificationPair build_LR(const SchemeParams& params, Complex T);

/// G = L^{-1} R by linear solve. Throws SingularAtT at a pole of G.
CMatrix amplification_matrix(const SchemeParams& params, Complex T);

/// Limit of G as T -> 0 for p = 3. Throws DegenerateAlphaM when alpha_m = 0.
CMatrix limit_matrix_zero(const SchemeParams& params);

/// Limit of G as Re(T) -> infinity for p = 3 with gamma_1 = gamma_2.
CMatrix limit_matrix_inf(const SchemeParams& params);

/// Eigenvalues of limit_matrix_inf from its block lower-triangular form:
/// the two roots of the leading 2x2 block, then 1 - 1/gamma_1.
std::array<Complex, 3> limit_inf_eigenvalues(const SchemeParams& params);

/// max_n |sum_{j=0}^{p} (-1)^j G_j U_{n+1-j}| over every window of the
/// sequence, with G_0 = 1 and G_j the principal-minor sums of G(T).
double characteristic_recurrence_residual(const SchemeParams& params, Complex T,
                                          std::span<const Complex> sequence);

/// Bracket coefficients (b0, b1) of the third-order local residual.
std::pair<double, double> truncation_bracket(const SchemeParams& params, Complex T);

/// (b0 + T b1) T^3 / (12 (alpha_m + gamma_1 alpha_f T)).
Complex truncation_residual(const SchemeParams& params, Complex T);

/// Eigenvalue of G(T) nearest e^{-T}; ties go to the larger real part.
Complex principal_eigenvalue(const SchemeParams& params, Complex T);

}  // namespace galpha
