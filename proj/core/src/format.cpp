#include "idslab/format.hpp"

#include <cstdio>

namespace idslab {

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace idslab
