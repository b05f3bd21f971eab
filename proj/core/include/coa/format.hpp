#pragma once

#include <string>

namespace coa {

/// printf-style %.17g. Shared by every text emitter so that parse/emit
/// round-trips are byte-identical.
std::string format_g17(double v);

}  // namespace coa
