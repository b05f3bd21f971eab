#include "coa/format.hpp"

#include <cstdio>

namespace coa {

std::string format_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace coa
