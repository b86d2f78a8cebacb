#include "galpha/csv.hpp"

#include <cmath>

#include <fmt/format.h>

namespace galpha {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

}  // namespace galpha
