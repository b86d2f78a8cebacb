#pragma once

// Time marching for linear systems u' + A u = 0.
//
// The state is the tau-scaled derivative stack W_j = tau^j U^(j),
// j = 0 .. p-1. One step solves
//   (alpha_m I + gamma_1 alpha_f tau A) W_{p-1}^{n+1} = b
// for the top block and then updates W_0 .. W_{p-2} explicitly from the
// Taylor ladder. For a scalar A = lambda this is exactly W^{n+1} = G(lambda tau) W^n.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "galpha/numkit.hpp"
#include "galpha/schemes.hpp"

namespace galpha {

struct LinearProblem {
  std::size_t dim = 0;
  /// v -> A v
  std::function<CVector(std::span<const Complex>)> apply;
  /// (c1, sigma, b) -> x with (c1 I + sigma A) x = b. Throws StepSingular
  /// when the shifted operator is numerically singular.
  std::function<CVector(Complex, Complex, std::span<const Complex>)> shifted_solve;
  std::string description;
};

/// A = lambda (m = 1).
LinearProblem scalar_problem(Complex lambda);

/// A = diag(lambdas).
LinearProblem diagonal_problem(std::vector<Complex> lambdas);

/// A = (kappa / h^2) tridiag(-1, 2, -1) on the unit interval with zero
/// boundary values, h = 1 / (n + 1). Shifted solves use the Thomas algorithm.
LinearProblem heat_problem(std::size_t n_interior, double diffusivity);

/// Grid point x_i = (i + 1) h of the heat problem.
std::vector<double> heat_grid(std::size_t n_interior);

class StateVector {
 public:
  StateVector(std::size_t dim, int order, double tau);

  std::size_t dim() const noexcept { return dim_; }
  int order() const noexcept { return order_; }
  double tau() const noexcept { return tau_; }

  /// Block j holds tau^j U^(j).
  std::span<Complex> block(int j);
  std::span<const Complex> block(int j) const;
  std::span<const Complex> value() const { return block(0); }
  /// All blocks concatenated, block 0 first.
  std::span<const Complex> stack() const noexcept { return stack_; }

  /// Changes the step size, scaling block j by (new_tau / tau)^j.
  void rescale(double new_tau);

 private:
  std::size_t dim_;
  int order_;
  double tau_;
  std::vector<Complex> stack_;
};

/// Block j = tau^j (-A)^j u0.
StateVector init_state(const LinearProblem& problem, std::span<const Complex> u0, int p,
                       double tau);

/// One step; calls shifted_solve exactly once and apply exactly once.
StateVector step(const SchemeParams& params, const LinearProblem& problem,
                 const StateVector& state);

struct Trajectory {
  std::vector<double> t;
  std::vector<CVector> u;
};

/// N = round(t_end / tau) uniform steps; the t = 0 state is included.
/// Step failures are rethrown with the step index in the message.
Trajectory integrate(const SchemeParams& params, const LinearProblem& problem,
                     std::span<const Complex> u0, double tau, double t_end);

/// Same as integrate, also returning the final full state.
Trajectory integrate(const SchemeParams& params, const LinearProblem& problem,
                     std::span<const Complex> u0, double tau, double t_end,
                     StateVector* final_state);

/// CSV `t,re_u_1,im_u_1,...` with 17 significant digits.
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);

}  // namespace galpha
