#include "galpha/schemes.hpp"

#include <cmath>

#include <fmt/format.h>

#include "galpha/error.hpp"

namespace galpha {

std::string_view to_string(Variant v) {
  return v == Variant::EqualGamma ? "equal" : "remark1";
}

Variant parse_variant(std::string_view text) {
  if (text == "equal" || text == "EqualGamma") return Variant::EqualGamma;
  if (text == "remark1" || text == "RemarkOne") return Variant::RemarkOne;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown variant '{}'", text));
}

std::string_view to_string(RhoBranch b) {
  switch (b) {
    case RhoBranch::Main: return "main";
    case RhoBranch::Alt1: return "alt1";
    case RhoBranch::Alt2: return "alt2";
    case RhoBranch::Alt3: return "alt3";
  }
  return "unknown";
}

RhoBranch parse_branch(std::string_view text) {
  for (const auto b : kAllBranches)
    if (text == to_string(b)) return b;
  throw Error(ErrorCode::InvalidArgument, fmt::format("unknown rho branch '{}'", text));
}

Rational c_of_p(int p) {
  static constexpr std::array<Rational, 10> table = {{
      {1, 2}, {5, 12}, {1, 3}, {31, 120}, {1, 5},
      {41, 252}, {1, 7}, {31, 240}, {1, 9}, {61, 660},
  }};
  if (p < kMinTabulatedOrder || p > kMaxTabulatedOrder)
    throw Error(ErrorCode::OutOfTable,
                fmt::format("C(p) is tabulated for p in [{}, {}], got {}", kMinTabulatedOrder,
                            kMaxTabulatedOrder, p));
  return table[static_cast<std::size_t>(p - kMinTabulatedOrder)];
}

SchemeParams make_scheme(int p, double alpha_m, double alpha_f, Variant variant) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, fmt::format("order must be >= 2, got {}", p));
  SchemeParams s;
  s.p = p;
  s.alpha_m = alpha_m;
  s.alpha_f = alpha_f;
  s.variant = variant;
  if (variant == Variant::RemarkOne) {
    if (p != 3)
      throw Error(ErrorCode::VariantUnsupported,
                  fmt::format("RemarkOne variant exists only for p = 3, got {}", p));
    const double denom = 2.0 + 3.0 * alpha_f;
    if (denom == 0.0)
      throw Error(ErrorCode::DegenerateParams, "RemarkOne gammas undefined at alpha_f = -2/3");
    const double g1 = 3.0 * alpha_m / denom;
    const double g2 = (10.0 - 9.0 * alpha_f - 36.0 * alpha_f * alpha_f + 6.0 * alpha_m +
                       36.0 * alpha_m * alpha_f) /
                      (6.0 * denom);
    s.gammas = {g1, g2};
    return s;
  }
  const double g = c_of_p(p).value() + alpha_m - alpha_f;
  s.gammas.assign(static_cast<std::size_t>(p - 1), g);
  return s;
}

AlphaPair params_from_rho(double rho, RhoBranch branch) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw Error(ErrorCode::InvalidArgument, fmt::format("rho_inf must lie in [0, 1], got {}", rho));
  const double r2 = rho * rho;
  const double sq = (rho + 1.0) * (rho + 1.0);
  switch (branch) {
    case RhoBranch::Main:
      return {(13.0 + 20.0 * rho - 5.0 * r2) / (12.0 * sq), (1.0 + 3.0 * rho) / (2.0 * sq)};
    case RhoBranch::Alt1:
      if (rho == 1.0) throw Error(ErrorCode::PoleAtRho, "branch alt1 has a pole at rho_inf = 1");
      return {(-13.0 - 31.0 * rho + r2 - 5.0 * r2 * rho) / (12.0 * sq * (rho - 1.0)),
              (1.0 + 3.0 * rho) / (2.0 * sq)};
    case RhoBranch::Alt2:
    case RhoBranch::Alt3: {
      if (rho == 1.0)
        throw Error(ErrorCode::PoleAtRho,
                    fmt::format("branch {} has a pole at rho_inf = 1", to_string(branch)));
      const double root = std::sqrt(7.0 + 18.0 * r2);
      const double denom = 1.0 - r2;
      if (branch == RhoBranch::Alt2)
        return {(22.0 - 12.0 * rho + 5.0 * r2 + 3.0 * root) / (12.0 * denom),
                (5.0 + root) / (4.0 * denom)};
      return {(22.0 + 12.0 * rho + 5.0 * r2 - 3.0 * root) / (12.0 * denom),
              (5.0 - root) / (4.0 * denom)};
    }
  }
  throw Error(ErrorCode::InvalidArgument, "unknown rho branch");
}

AlphaPair second_order_params_from_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw Error(ErrorCode::InvalidArgument, fmt::format("rho_inf must lie in [0, 1], got {}", rho));
  return {(3.0 - rho) / (2.0 * (1.0 + rho)), 1.0 / (1.0 + rho)};
}

bool in_stability_region(double alpha_m, double alpha_f) {
  return alpha_m >= 7.0 / 12.0 - kRegionSlack && alpha_f >= 0.5 - kRegionSlack &&
         alpha_f <= alpha_m - 1.0 / 12.0 + kRegionSlack;
}

std::pair<double, double> order_condition_residuals(const SchemeParams& s) {
  if (s.p != 3)
    throw Error(ErrorCode::VariantUnsupported,
                fmt::format("order conditions are stated for p = 3, got {}", s.p));
  const double g1 = s.gamma(1);
  const double g2 = s.gamma(2);
  const double r1 = -5.0 + 6.0 * g1 + 6.0 * g2 + 12.0 * s.alpha_f - 12.0 * s.alpha_m;
  const double r2 = -5.0 - 2.0 * g1 + 6.0 * g2 + 12.0 * s.alpha_f - 12.0 * g1 * s.alpha_f;
  return {r1, r2};
}

}  // namespace galpha
