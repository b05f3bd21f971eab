#include "coa/domain.hpp"

#include <cmath>

#include "coa/errors.hpp"

namespace coa {

Domain Domain::compact(double a, double b) {
  Domain d;
  d.kind = Kind::CompactInterval;
  d.a = a;
  d.b = b;
  d.check();
  return d;
}

Domain Domain::real_line(double l0) {
  Domain d;
  d.kind = Kind::RealLine;
  d.l0 = l0;
  d.check();
  return d;
}

void Domain::check(int max_level) const {
  if (is_compact()) {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
      throw InvalidArgumentError("compact domain requires finite a < b");
    return;
  }
  if (!(l0 > 0.0) || !std::isfinite(l0))
    throw InvalidArgumentError("real-line domain requires l0 > 0");
  double prev = 0.0;
  for (int level = 0; level <= max_level; ++level) {
    const double l = half_width(level);
    if (!(l >= prev))
      throw InvalidArgumentError("truncation schedule must be nondecreasing");
    prev = l;
  }
  if (!(half_width(max_level) > 2.0 * l0))
    throw InvalidArgumentError("truncation schedule must grow without bound");
}

}  // namespace coa
