#include "galpha/amplification.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "galpha/error.hpp"

namespace galpha {

namespace {

void require_p3(const SchemeParams& s, const char* what) {
  if (s.p != 3)
    throw Error(ErrorCode::VariantUnsupported,
                fmt::format("{} is defined for p = 3 only, got p = {}", what, s.p));
}

CMatrix to_matrix(std::size_t p, const std::vector<Complex>& v) {
  CMatrix m(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < p; ++j) m(i, j) = v[i * p + j];
  return m;
}

}  // namespace

AmplificationPair build_LR(const SchemeParams& params, Complex T) {
  if (params.p < 2)
    throw Error(ErrorCode::InvalidArgument, fmt::format("order must be >= 2, got {}", params.p));
  if (params.gammas.size() != static_cast<std::size_t>(params.p - 1))
    throw Error(ErrorCode::InvalidArgument, "gamma vector length must equal p - 1");
  const auto m = one_step_matrices<Complex, double>(params.p, params.alpha_m, params.alpha_f,
                                                    params.gammas, T);
  return {to_matrix(m.p, m.L), to_matrix(m.p, m.R), T};
}

CMatrix amplification_matrix(const SchemeParams& params, Complex T) {
  const AmplificationPair pair = build_LR(params, T);
  try {
    return solve(pair.L, pair.R);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw Error(ErrorCode::SingularAtT,
                fmt::format("L is singular at T = ({}, {}): {}", T.real(), T.imag(), e.what()));
  }
}

CMatrix limit_matrix_zero(const SchemeParams& s) {
  require_p3(s, "limit_matrix_zero");
  const double am = s.alpha_m;
  if (am == 0.0) throw Error(ErrorCode::DegenerateAlphaM, "T -> 0 limit needs alpha_m != 0");
  const double g1 = s.gamma(1);
  const double g2 = s.gamma(2);
  return CMatrix{{1.0, 1.0 - g2 / (2.0 * am), 0.5 - g2 / (2.0 * am)},
                 {0.0, 1.0 - g1 / am, 1.0 - g1 / am},
                 {0.0, -1.0 / am, 1.0 - 1.0 / am}};
}

CMatrix limit_matrix_inf(const SchemeParams& s) {
  require_p3(s, "limit_matrix_inf");
  if (s.variant != Variant::EqualGamma)
    throw Error(ErrorCode::VariantUnsupported,
                "stiff limit closed form requires gamma_1 = gamma_2 (EqualGamma)");
  const double af = s.alpha_f;
  const double g = s.gamma(1);
  if (af == 0.0 || g == 0.0)
    throw Error(ErrorCode::DegenerateParams, "stiff limit needs alpha_f != 0 and gamma_1 != 0");
  const double a = 1.0 - 1.0 / (2.0 * af);
  const double c = -1.0 / (g * af);
  return CMatrix{{a, a, 0.0}, {-1.0 / af, 1.0 - 1.0 / af, 0.0}, {c, c, 1.0 - 1.0 / g}};
}

std::array<Complex, 3> limit_inf_eigenvalues(const SchemeParams& s) {
  const CMatrix a = limit_matrix_inf(s);
  // Block lower triangular: a 2x2 block on top, then the (3,3) entry.
  const Complex tr = a(0, 0) + a(1, 1);
  const Complex det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  return {(tr + disc) / 2.0, (tr - disc) / 2.0, a(2, 2)};
}

double characteristic_recurrence_residual(const SchemeParams& params, Complex T,
                                          std::span<const Complex> seq) {
  const auto p = static_cast<std::size_t>(params.p);
  if (seq.size() < p + 1)
    throw Error(ErrorCode::TooShort,
                fmt::format("recurrence needs at least {} samples, got {}", p + 1, seq.size()));
  const std::vector<Complex> inv = principal_minor_sums(amplification_matrix(params, T));
  double worst = 0.0;
  // n + 1 runs over the newest index of each window.
  for (std::size_t newest = p; newest < seq.size(); ++newest) {
    Complex sum = seq[newest];
    double sign = -1.0;
    for (std::size_t j = 1; j <= p; ++j, sign = -sign) sum += sign * inv[j - 1] * seq[newest - j];
    worst = std::max(worst, std::abs(sum));
  }
  return worst;
}

std::pair<double, double> truncation_bracket(const SchemeParams& s, Complex /*T*/) {
  require_p3(s, "truncation_bracket");
  return order_condition_residuals(s);
}

Complex truncation_residual(const SchemeParams& s, Complex T) {
  const auto [b0, b1] = truncation_bracket(s, T);
  return (b0 + T * b1) * T * T * T / (12.0 * (s.alpha_m + s.gamma(1) * s.alpha_f * T));
}

Complex principal_eigenvalue(const SchemeParams& params, Complex T) {
  const Complex target = std::exp(-T);
  const std::vector<Complex> eig = eigenvalues(amplification_matrix(params, T));
  Complex best = eig.front();
  double best_dist = std::abs(best - target);
  for (const auto& z : eig) {
    const double d = std::abs(z - target);
    if (d < best_dist || (d == best_dist && z.real() > best.real())) {
      best = z;
      best_dist = d;
    }
  }
  return best;
}

}  // namespace galpha
