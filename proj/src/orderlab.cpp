#include "galpha/orderlab.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

#include <boost/math/tools/roots.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include "galpha/amplification.hpp"
#include "galpha/csv.hpp"
#include "galpha/error.hpp"
#include "galpha/integrator.hpp"

namespace galpha {

namespace {

using Real = boost::multiprecision::cpp_bin_float_50;

constexpr int kSecantIterations = 200;

// det(R - mu L) by elimination with partial pivoting.
Real shifted_det(const OneStepMatrices<Real>& m, const Real& mu) {
  const std::size_t p = m.p;
  std::vector<Real> a(p * p);
  for (std::size_t k = 0; k < p * p; ++k) a[k] = m.R[k] - mu * m.L[k];
  Real det = 1;
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < p; ++r)
      if (abs(a[r * p + c]) > abs(a[piv * p + c])) piv = r;
    if (a[piv * p + c] == 0) return Real(0);
    if (piv != c) {
      for (std::size_t k = 0; k < p; ++k) std::swap(a[c * p + k], a[piv * p + k]);
      det = -det;
    }
    const Real d = a[c * p + c];
    det *= d;
    for (std::size_t r = c + 1; r < p; ++r) {
      const Real f = a[r * p + c] / d;
      if (f == 0) continue;
      for (std::size_t k = c; k < p; ++k) a[r * p + k] -= f * a[c * p + k];
    }
  }
  return det;
}

// Principal eigenvalue minus exp(-T), found by secant iteration on the
// characteristic polynomial from exp(-T).
Real principal_defect(int p, const Real& C, const Real& T, const Real& am, const Real& af) {
  const std::vector<Real> gammas(static_cast<std::size_t>(p - 1), C + am - af);
  const auto m = one_step_matrices<Real, Real>(p, am, af, std::span<const Real>(gammas), T);
  const Real target = exp(-T);
  const Real tol = std::numeric_limits<Real>::epsilon() * 16;
  Real x0 = target;
  Real x1 = target * (1 + Real(1e-12));
  Real f0 = shifted_det(m, x0);
  Real f1 = shifted_det(m, x1);
  for (int it = 0; it < kSecantIterations; ++it) {
    if (f1 == f0) break;
    const Real x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = shifted_det(m, x1);
    if (abs(x1 - x0) <= tol * abs(x1) || f1 == 0) return x1 - target;
  }
  if (abs(x1 - x0) <= tol * 1e6 * abs(x1)) return x1 - target;
  throw Error(ErrorCode::NoConvergence, "principal eigenvalue iteration did not converge");
}

Real functional(int p, const Real& C, const Real& T, const Real& am, const Real& af) {
  return principal_defect(p, C, T, am, af) / pow(T, p + 1);
}

Real root_mp(int p, const Real& T, const Real& am, const Real& af, const Real& lo = 0,
             const Real& hi = 1) {
  auto f = [&](const Real& c) { return functional(p, c, T, am, af); };
  const Real flo = f(lo);
  const Real fhi = f(hi);
  if (flo == 0) return lo;
  if (fhi == 0) return hi;
  if ((flo < 0) == (fhi < 0))
    throw Error(ErrorCode::NoRoot,
                fmt::format("error functional keeps its sign on [{}, {}] for p = {}",
                            static_cast<double>(lo), static_cast<double>(hi), p));
  std::uintmax_t max_iter = 400;
  const auto bracket = boost::math::tools::toms748_solve(
      f, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<Real>(150), max_iter);
  return (bracket.first + bracket.second) / 2;
}

void check_order(int p) {
  if (p < kMinTabulatedOrder || p > kMaxTabulatedOrder)
    throw Error(ErrorCode::OutOfTable, fmt::format("C recovery supports 2 <= p <= 11, got {}", p));
}

}  // namespace

std::vector<double> dyadic_taus(int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, -k));
  return out;
}

ConvergenceReport measure_order(const SchemeParams& params, Complex lambda, double t_end,
                                const std::vector<double>& taus) {
  if (taus.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two step sizes");
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (!(taus[k] > 0.0)) throw Error(ErrorCode::InvalidArgument, "step sizes must be positive");
    if (k > 0 && !(taus[k] < taus[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "step sizes must be strictly decreasing");
  }
  const LinearProblem prob = scalar_problem(lambda);
  const Complex exact = std::exp(-lambda * t_end);
  const CVector u0{Complex(1.0, 0.0)};

  ConvergenceReport rep;
  rep.taus = taus;
  for (double tau : taus) {
    const Trajectory tr = integrate(params, prob, u0, tau, t_end);
    const double err = std::abs(tr.u.back()[0] - exact);
    rep.errors.push_back(err);
    rep.trimmed.push_back(!(err >= kRoundoffFloor));
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    if (rep.trimmed[k]) continue;
    const double x = std::log2(taus[k]);
    const double y = std::log2(rep.errors[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2)
    throw Error(ErrorCode::AllAtRoundoff,
                fmt::format("only {} of {} errors above the round-off floor", n, taus.size()));
  const double dn = static_cast<double>(n);
  rep.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);

  for (std::size_t k = 0; k + 1 < taus.size(); ++k) {
    if (rep.trimmed[k] || rep.trimmed[k + 1]) {
      rep.pairwise_slopes.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    rep.pairwise_slopes.push_back(std::log2(rep.errors[k] / rep.errors[k + 1]) /
                                  std::log2(taus[k] / taus[k + 1]));
  }
  return rep;
}

void write_convergence_csv(const ConvergenceReport& report, std::ostream& out) {
  out << "tau,error,pairwise_slope\n";
  for (std::size_t k = 0; k < report.taus.size(); ++k) {
    out << format_number(report.taus[k]) << ',' << format_number(report.errors[k]) << ',';
    if (k < report.pairwise_slopes.size()) out << format_number(report.pairwise_slopes[k]);
    out << '\n';
  }
}

double error_functional(int p, double C, double T, double alpha_m, double alpha_f) {
  check_order(p);
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  return static_cast<double>(functional(p, Real(C), Real(T), Real(alpha_m), Real(alpha_f)));
}

double root_at_T(int p, double T, double alpha_m, double alpha_f, double lo, double hi) {
  check_order(p);
  if (!(T > 0.0)) throw Error(ErrorCode::InvalidArgument, "T must be positive");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty bracket");
  return static_cast<double>(root_mp(p, Real(T), Real(alpha_m), Real(alpha_f), Real(lo), Real(hi)));
}

double recover_C(int p, const RecoverOptions& options) {
  check_order(p);
  if (options.levels < 1) throw Error(ErrorCode::InvalidArgument, "levels must be positive");
  if (!(options.T0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "T0 must be positive");
  const Real am = options.alpha_m;
  const Real af = options.alpha_f;

  // The root at T is C(p) + c1 T + c2 T^2 + ...; halving T and eliminating
  // one power at a time.
  std::vector<Real> table;
  Real T = options.T0;
  for (int k = 0; k < options.levels; ++k) {
    table.push_back(root_mp(p, T, am, af));
    T /= 2;
  }
  for (int m = 1; m < options.levels; ++m) {
    const Real w = pow(Real(2), m);
    for (std::size_t k = 0; k + static_cast<std::size_t>(m) < static_cast<std::size_t>(options.levels);
         ++k)
      table[k] = (w * table[k + 1] - table[k]) / (w - 1);
  }
  return static_cast<double>(table.front());
}

}  // namespace galpha
