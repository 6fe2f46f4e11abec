#pragma once

#include <string>

namespace idslab {

/// Shortest round-trip-safe text: 17 significant digits, "%.17g".
std::string format_double(double x);

}  // namespace idslab
