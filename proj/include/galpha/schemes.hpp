#pragma once

#include <array>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace galpha {

/// Exact fraction, used for the tabulated order constants.
struct Rational {
  std::int64_t num;
  std::int64_t den;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Auxiliary condition closing the gamma system.
///   EqualGamma: gamma_j = C(p) + alpha_m - alpha_f for every j (any order).
///   RemarkOne:  the alternative third-order pair
///               gamma_1 = 3 alpha_m / (2 + 3 alpha_f),
///               gamma_2 = (10 - 9 af - 36 af^2 + 6 am + 36 am af) / (12 + 18 af).
enum class Variant { EqualGamma, RemarkOne };

std::string_view to_string(Variant v);
Variant parse_variant(std::string_view text);

struct SchemeParams {
  int p = 3;
  double alpha_m = 0.0;
  double alpha_f = 0.0;
  /// gamma_1 ... gamma_{p-1}; gammas[0] multiplies the highest derivative jump
  /// in the ladder row for U^(p-2).
  std::vector<double> gammas;
  Variant variant = Variant::EqualGamma;

  double gamma(int j) const { return gammas.at(static_cast<std::size_t>(j - 1)); }
};

inline constexpr int kMinTabulatedOrder = 2;
inline constexpr int kMaxTabulatedOrder = 11;

/// Order constant C(p) for 2 <= p <= 11. Throws OutOfTable otherwise.
Rational c_of_p(int p);

/// Fills the gammas for the requested auxiliary condition.
SchemeParams make_scheme(int p, double alpha_m, double alpha_f,
                         Variant variant = Variant::EqualGamma);

/// The four positive-rho representatives of the stiff-limit eigenvalue
/// conditions for the third-order scheme.
enum class RhoBranch { Main, Alt1, Alt2, Alt3 };

inline constexpr std::array<RhoBranch, 4> kAllBranches = {RhoBranch::Main, RhoBranch::Alt1,
                                                          RhoBranch::Alt2, RhoBranch::Alt3};

std::string_view to_string(RhoBranch b);
RhoBranch parse_branch(std::string_view text);

struct AlphaPair {
  double alpha_m;
  double alpha_f;
};

/// Closed-form (alpha_m, alpha_f) for a target high-frequency radius on one
/// branch. Alt1..Alt3 throw PoleAtRho at rho_inf = 1.
AlphaPair params_from_rho(double rho_inf, RhoBranch branch);

/// Classical second-order generalized-alpha parameters for first-order
/// systems: alpha_m = (3 - rho) / (2 (1 + rho)), alpha_f = 1 / (1 + rho).
AlphaPair second_order_params_from_rho(double rho_inf);

/// Absolute slack applied to the closed inequalities so that points computed
/// exactly on the boundary in floating point are not rejected.
inline constexpr double kRegionSlack = 1e-12;

/// Unconditional stability region of the EqualGamma third-order scheme:
/// alpha_m >= 7/12 and 1/2 <= alpha_f <= alpha_m - 1/12, boundary included.
bool in_stability_region(double alpha_m, double alpha_f);

/// Third-order conditions:
///   r1 = -5 + 6 g1 + 6 g2 + 12 af - 12 am
///   r2 = -5 - 2 g1 + 6 g2 + 12 af - 12 g1 af
std::pair<double, double> order_condition_residuals(const SchemeParams& params);

}  // namespace galpha
