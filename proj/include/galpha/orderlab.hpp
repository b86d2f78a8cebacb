#pragma once

// Empirical order of accuracy and recovery of the order constants C(p).

#include <iosfwd>
#include <vector>

#include "galpha/numkit.hpp"
#include "galpha/schemes.hpp"

namespace galpha {

/// Errors below this are treated as round-off and left out of the fit.
inline constexpr double kRoundoffFloor = 1e-13;

struct ConvergenceReport {
  std::vector<double> taus;
  std::vector<double> errors;
  /// OLS slope of log2(error) against log2(tau) over untrimmed points.
  double slope = 0.0;
  /// pairwise_slopes[k] compares taus[k] and taus[k + 1]; NaN if either
  /// point is trimmed. Length taus.size() - 1.
  std::vector<double> pairwise_slopes;
  std::vector<bool> trimmed;
};

/// Powers of two 2^-lo ... 2^-hi.
std::vector<double> dyadic_taus(int lo, int hi);

/// Integrates u' + lambda u = 0 from u = 1 with each tau and compares with
/// exp(-lambda t_end). Throws AllAtRoundoff when fewer than two errors sit
/// above the floor.
ConvergenceReport measure_order(const SchemeParams& params, Complex lambda, double t_end,
                                const std::vector<double>& taus);

/// CSV `tau,error,pairwise_slope`; the last row has an empty slope.
void write_convergence_csv(const ConvergenceReport& report, std::ostream& out);

struct RecoverOptions {
  double alpha_m = 1.0;
  double alpha_f = 0.75;
  /// Largest T; the others are T0 / 2^k.
  double T0 = 1e-2;
  /// Number of T values in the extrapolation table.
  int levels = 5;
};

/// E(C) = (mu(T) - exp(-T)) / T^(p+1), mu the principal eigenvalue of G(T)
/// for gamma_j = C + alpha_m - alpha_f. Evaluated with 50 significant digits
/// and rounded.
double error_functional(int p, double C, double T, double alpha_m, double alpha_f);

/// Root of E on C in [lo, hi] at one T. Throws NoRoot without a sign change.
double root_at_T(int p, double T, double alpha_m, double alpha_f, double lo = 0.0,
                 double hi = 1.0);

/// Roots at T0 / 2^k extrapolated to T -> 0. Orders 2..6 are the supported
/// range; 7..11 are accepted as experimental.
double recover_C(int p, const RecoverOptions& options = {});

}  // namespace galpha
