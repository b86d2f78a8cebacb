#pragma once

#include <string>

namespace galpha {

/// Shortest round-trip-safe text for CSV fields: 17 significant digits,
/// "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double x);

}  // namespace galpha
