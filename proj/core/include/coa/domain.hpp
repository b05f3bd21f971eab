#pragma once

#include <cmath>

namespace coa {

/// Type space of the model: either a fixed compact interval or the real line,
/// truncated at level-dependent half-width L(level) = l0 * 2^(level/2).
struct Domain {
  enum class Kind { CompactInterval, RealLine };

  Kind kind = Kind::CompactInterval;
  double a = 0.0;
  double b = 1.0;
  double l0 = 4.0;

  static Domain compact(double a, double b);
  static Domain real_line(double l0 = 4.0);

  bool is_compact() const { return kind == Kind::CompactInterval; }

  double half_width(int level) const { return l0 * std::exp2(0.5 * level); }
  double lower(int level) const { return is_compact() ? a : -half_width(level); }
  double upper(int level) const { return is_compact() ? b : half_width(level); }

  /// Checks the interval bounds, resp. that the truncation schedule is
  /// positive, nondecreasing and unbounded over the given level range.
  void check(int max_level = 16) const;
};

}  // namespace coa
