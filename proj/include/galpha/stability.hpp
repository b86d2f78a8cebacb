#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "galpha/numkit.hpp"
#include "galpha/schemes.hpp"

namespace galpha {

/// Spectral radius allowance for solver noise at unit-modulus roots.
inline constexpr double kRadiusTolerance = 1e-9;
/// Two roots this close to each other and to the unit circle count as a
/// repeated unit root, which is unstable.
inline constexpr double kRepeatedRootWindow = 1e-7;
/// Finite stand-in for the stiff limit when no closed form exists.
inline constexpr double kLargeT = 1e8;

/// Sample points T = lambda * tau used to certify a parameter pair.
/// The default is the positive real axis; complex rays are opt-in.
struct TSampleSpec {
  std::size_t n_real = 48;
  double magnitude_min = 1e-4;
  double magnitude_max = 1e8;
  std::vector<double> ray_angles;  // radians
  std::size_t n_per_ray = 16;

  /// Adds rays at arg(T) = +-pi/4 and +-0.98 pi/2.
  static TSampleSpec with_complex_rays();

  std::vector<Complex> samples() const;
  /// Same magnitude range with 2(n - 1) + 1 points per family, a superset of
  /// the original samples.
  TSampleSpec densified() const;
};

struct RadiusResult {
  double radius = 0.0;
  bool repeated_unit_root = false;
  bool singular = false;

  bool stable() const {
    return !singular && !repeated_unit_root && radius <= 1.0 + kRadiusTolerance;
  }
};

/// Worst spectral radius of G over the samples plus the two limit matrices
/// (the T -> 0 limit always; the stiff limit in closed form for EqualGamma,
/// G(kLargeT) otherwise). Singular samples mark the result unstable instead
/// of throwing.
RadiusResult worst_case_radius(const SchemeParams& params, std::span<const Complex> T_samples);

struct GridSpec {
  double alpha_m_min = 0.0;
  double alpha_m_max = 1.5;
  double alpha_f_min = 0.0;
  double alpha_f_max = 1.5;
  std::size_t n_alpha_m = 200;
  std::size_t n_alpha_f = 200;
};

/// Uniform axis with inclusive endpoints; a single point sits at lo.
std::vector<double> uniform_axis(double lo, double hi, std::size_t n);

struct StabilityMap {
  Variant variant = Variant::EqualGamma;
  std::vector<double> alpha_m_axis;
  std::vector<double> alpha_f_axis;
  std::vector<Complex> T_samples;
  /// Row-major: index = i_m * alpha_f_axis.size() + i_f.
  std::vector<RadiusResult> cells;

  const RadiusResult& at(std::size_t i_m, std::size_t i_f) const {
    return cells[i_m * alpha_f_axis.size() + i_f];
  }
  std::size_t stable_count() const;
};

/// Evaluates every cell; cells are independent and are spread over
/// `threads` workers (0 = hardware concurrency). The result does not depend
/// on the worker count.
StabilityMap scan_region(Variant variant, const GridSpec& grid, std::span<const Complex> T_samples,
                         unsigned threads = 0);

struct RegionComparison {
  std::size_t total = 0;
  std::size_t agree = 0;
  /// Disagreeing cells with no 8-neighbour on the other side of the
  /// closed-form boundary.
  std::size_t off_boundary = 0;

  double agreement() const { return total == 0 ? 1.0 : double(agree) / double(total); }
};

/// Cell-by-cell comparison with in_stability_region.
RegionComparison compare_with_closed_form(const StabilityMap& map);

/// CSV `alpha_m,alpha_f,radius,stable`, row-major, 17 significant digits.
void write_stability_csv(const StabilityMap& map, std::ostream& out);

/// max |eig(A_inf)| - rho_inf at params_from_rho(rho_inf, branch), from the
/// closed-form stiff-limit eigenvalues.
double verify_rho_control(double rho_inf, RhoBranch branch);

struct RhoSample {
  RhoBranch branch = RhoBranch::Main;
  double rho = 0.0;
  bool pole = false;
  double alpha_m = 0.0;
  double alpha_f = 0.0;
  bool inside_region = false;
  std::optional<double> max_eig_inf;
};

/// rho sampled uniformly on [0, 1]; samples at a branch pole are kept and
/// flagged.
std::vector<RhoSample> rho_curve(RhoBranch branch, std::size_t n_points);

/// CSV `branch,rho,alpha_m,alpha_f,inside_region,max_eig_inf,pole`; pole rows
/// leave the value fields empty.
void write_rho_curves_csv(std::span<const RhoSample> samples, std::ostream& out);

/// True when the eigenvalues of A_inf are all real (imaginary parts below
/// 1e-12 relative).
bool stiff_limit_eigenvalues_real(const SchemeParams& params);

}  // namespace galpha
