#include "galpha/integrator.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "galpha/csv.hpp"
#include "galpha/error.hpp"

namespace galpha {

namespace {

constexpr double kShiftTolerance = 1e-14;

void axpy(Complex a, std::span<const Complex> x, std::span<Complex> y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

}  // namespace

LinearProblem scalar_problem(Complex lambda) {
  LinearProblem prob;
  prob.dim = 1;
  prob.apply = [lambda](std::span<const Complex> v) { return CVector{lambda * v[0]}; };
  prob.shifted_solve = [lambda](Complex c1, Complex sigma, std::span<const Complex> b) {
    const Complex d = c1 + sigma * lambda;
    if (!(std::abs(d) > kShiftTolerance * (std::abs(c1) + std::abs(sigma * lambda))))
      throw Error(ErrorCode::StepSingular, "shifted scalar operator vanishes");
    return CVector{b[0] / d};
  };
  prob.description = fmt::format("scalar lambda = ({}, {})", lambda.real(), lambda.imag());
  return prob;
}

LinearProblem diagonal_problem(std::vector<Complex> lambdas) {
  LinearProblem prob;
  prob.dim = lambdas.size();
  prob.apply = [lambdas](std::span<const Complex> v) {
    CVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = lambdas[i] * v[i];
    return out;
  };
  prob.shifted_solve = [lambdas](Complex c1, Complex sigma, std::span<const Complex> b) {
    CVector x(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) {
      const Complex d = c1 + sigma * lambdas[i];
      if (!(std::abs(d) > kShiftTolerance * (std::abs(c1) + std::abs(sigma * lambdas[i]))))
        throw Error(ErrorCode::StepSingular,
                    fmt::format("shifted diagonal operator vanishes in component {}", i));
      x[i] = b[i] / d;
    }
    return x;
  };
  prob.description = fmt::format("diagonal, m = {}", prob.dim);
  return prob;
}

std::vector<double> heat_grid(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n + 1);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(i + 1) * h;
  return x;
}

LinearProblem heat_problem(std::size_t n, double kappa) {
  if (n < 2) throw Error(ErrorCode::InvalidArgument, "heat problem needs n >= 2");
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "diffusivity must be positive");
  const double h = 1.0 / static_cast<double>(n + 1);
  const double s = kappa / (h * h);

  LinearProblem prob;
  prob.dim = n;
  prob.apply = [n, s](std::span<const Complex> v) {
    CVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = 2.0 * v[i];
      if (i > 0) acc -= v[i - 1];
      if (i + 1 < n) acc -= v[i + 1];
      out[i] = s * acc;
    }
    return out;
  };
  prob.shifted_solve = [n, s](Complex c1, Complex sigma, std::span<const Complex> b) {
    const Complex diag = c1 + 2.0 * s * sigma;
    const Complex off = -s * sigma;
    const double scale = std::abs(c1) + 4.0 * s * std::abs(sigma);
    CVector cp(n), dp(n), x(n);
    Complex m = diag;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) m = diag - off * cp[i - 1];
      if (!(std::abs(m) > kShiftTolerance * scale))
        throw Error(ErrorCode::StepSingular,
                    fmt::format("tridiagonal pivot vanishes at row {}", i));
      cp[i] = off / m;
      dp[i] = (b[i] - (i > 0 ? off * dp[i - 1] : Complex{})) / m;
    }
    x[n - 1] = dp[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  };
  prob.description = fmt::format("heat n = {}, kappa = {}", n, kappa);
  return prob;
}

StateVector::StateVector(std::size_t dim, int order, double tau)
    : dim_(dim), order_(order), tau_(tau), stack_(dim * static_cast<std::size_t>(order)) {
  if (dim == 0) throw Error(ErrorCode::InvalidArgument, "state dimension must be positive");
  if (order < 2) throw Error(ErrorCode::InvalidArgument, "order must be >= 2");
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
}

std::span<Complex> StateVector::block(int j) {
  return std::span<Complex>(stack_).subspan(static_cast<std::size_t>(j) * dim_, dim_);
}

std::span<const Complex> StateVector::block(int j) const {
  return std::span<const Complex>(stack_).subspan(static_cast<std::size_t>(j) * dim_, dim_);
}

void StateVector::rescale(double new_tau) {
  if (!(new_tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  const double ratio = new_tau / tau_;
  double factor = 1.0;
  for (int j = 1; j < order_; ++j) {
    factor *= ratio;
    for (Complex& z : block(j)) z *= factor;
  }
  tau_ = new_tau;
}

StateVector init_state(const LinearProblem& problem, std::span<const Complex> u0, int p,
                       double tau) {
  if (u0.size() != problem.dim)
    throw Error(ErrorCode::DimensionMismatch, "initial value length differs from problem size");
  StateVector state(problem.dim, p, tau);
  std::copy(u0.begin(), u0.end(), state.block(0).begin());
  for (int j = 1; j < p; ++j) {
    const CVector next = problem.apply(state.block(j - 1));
    auto dst = state.block(j);
    for (std::size_t i = 0; i < next.size(); ++i) dst[i] = -tau * next[i];
  }
  return state;
}

StateVector step(const SchemeParams& params, const LinearProblem& problem,
                 const StateVector& state) {
  const int p = params.p;
  if (state.order() != p)
    throw Error(ErrorCode::InvalidArgument,
                fmt::format("state order {} differs from scheme order {}", state.order(), p));
  if (params.gammas.size() != static_cast<std::size_t>(p - 1))
    throw Error(ErrorCode::InvalidArgument, "gamma vector length must equal p - 1");
  const std::size_t m = state.dim();
  const double tau = state.tau();
  const double am = params.alpha_m;
  const double af = params.alpha_f;

  std::vector<double> fact(static_cast<std::size_t>(p) + 1, 1.0);
  for (std::size_t i = 1; i < fact.size(); ++i) fact[i] = fact[i - 1] * static_cast<double>(i);
  const double kfact = fact[static_cast<std::size_t>(p - 2)];
  const auto top = state.block(p - 1);

  // Explicit part of every ladder row: next_i = c_i + g_i * x.
  StateVector next(m, p, tau);
  std::vector<double> g(static_cast<std::size_t>(p - 1));
  for (int i = 0; i + 1 < p; ++i) {
    const int span_len = p - 1 - i;
    const double gamma = params.gammas[static_cast<std::size_t>(span_len - 1)];
    g[static_cast<std::size_t>(i)] = gamma / fact[static_cast<std::size_t>(span_len)];
    auto c = next.block(i);
    for (int j = i; j + 1 < p; ++j)
      axpy(1.0 / fact[static_cast<std::size_t>(j - i)], state.block(j), c);
    axpy((1.0 - gamma) / fact[static_cast<std::size_t>(span_len)], top, c);
  }

  // Consistency row with the ladder row for U^(p-2) substituted.
  CVector y(m), b(m);
  for (int j = 0; j + 1 < p; ++j)
    axpy(kfact / fact[static_cast<std::size_t>(j)], state.block(j), y);
  axpy(-af, state.block(p - 2), y);
  axpy(af, next.block(p - 2), y);
  const CVector ay = problem.apply(y);
  for (std::size_t i = 0; i < m; ++i) b[i] = -tau * ay[i] + am * top[i];
  for (int j = 1; j < p; ++j)
    axpy(-kfact / fact[static_cast<std::size_t>(j - 1)], state.block(j), b);

  const Complex sigma = params.gamma(1) * af * tau;
  CVector x;
  try {
    x = problem.shifted_solve(am, sigma, b);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::StepSingular) throw;
    throw Error(ErrorCode::SolveFailed, fmt::format("shifted solve failed: {}", e.what()));
  }
  if (x.size() != m) throw Error(ErrorCode::SolveFailed, "shifted solve returned wrong length");

  for (int i = 0; i + 1 < p; ++i) axpy(g[static_cast<std::size_t>(i)], x, next.block(i));
  std::copy(x.begin(), x.end(), next.block(p - 1).begin());
  return next;
}

Trajectory integrate(const SchemeParams& params, const LinearProblem& problem,
                     std::span<const Complex> u0, double tau, double t_end) {
  return integrate(params, problem, u0, tau, t_end, nullptr);
}

Trajectory integrate(const SchemeParams& params, const LinearProblem& problem,
                     std::span<const Complex> u0, double tau, double t_end,
                     StateVector* final_state) {
  if (!(tau > 0.0)) throw Error(ErrorCode::InvalidArgument, "tau must be positive");
  if (!(t_end >= tau)) throw Error(ErrorCode::InvalidArgument, "t_end must be at least tau");
  const auto steps = static_cast<std::size_t>(std::llround(t_end / tau));
  StateVector state = init_state(problem, u0, params.p, tau);
  Trajectory traj;
  traj.t.reserve(steps + 1);
  traj.u.reserve(steps + 1);
  traj.t.push_back(0.0);
  traj.u.emplace_back(state.value().begin(), state.value().end());
  for (std::size_t n = 1; n <= steps; ++n) {
    try {
      state = step(params, problem, state);
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("step {}: {}", n, e.what()));
    }
    traj.t.push_back(static_cast<double>(n) * tau);
    traj.u.emplace_back(state.value().begin(), state.value().end());
  }
  if (final_state) *final_state = state;
  return traj;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  const std::size_t m = traj.u.empty() ? 0 : traj.u.front().size();
  out << 't';
  for (std::size_t i = 1; i <= m; ++i) out << ",re_u_" << i << ",im_u_" << i;
  out << '\n';
  for (std::size_t n = 0; n < traj.t.size(); ++n) {
    out << format_number(traj.t[n]);
    for (const Complex& z : traj.u[n])
      out << ',' << format_number(z.real()) << ',' << format_number(z.imag());
    out << '\n';
  }
}

}  // namespace galpha
