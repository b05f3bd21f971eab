#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "coa/model.hpp"

namespace coa {

enum class CheckStatus { Pass, Fail, Inconclusive };

std::string_view check_status_name(CheckStatus s);

struct ValidationEntry {
  std::string name;  // U1, U2, U4, T1, irreducibility, cusp
  CheckStatus status = CheckStatus::Inconclusive;
  double witness = 0.0;
  std::string note;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;

  bool all_passed() const;
  bool any_failed() const;
  const ValidationEntry* find(std::string_view name) const;
};

struct ValidationOptions {
  double essinf_tol = 1e-6;
  double u1_cap = 1e6;
  int essinf_factor = 4;
  /// Floor on w inside the cusp integral; divergence is declared above the cap.
  double cusp_floor = 1e-14;
  double divergence_cap = 1e12;
};

/// Numerical checks of the existence/uniqueness conditions on the level grid:
/// kernel nonnegativity (U1), bounded total mutation rate (U2), finite
/// Hille-Tamarkin norm at alpha = 1 (U4), essinf w = 0 (T1), strong
/// connectivity of the kernel support graph, and the cusp condition near the
/// minimizer of w. Grid evidence cannot certify the continuum properties, so
/// borderline cusp values are reported inconclusive.
ValidationReport validate_model(const ModelSpec& model, int level,
                                std::size_t base_cells = 128,
                                const ValidationOptions& opts = {});

}  // namespace coa
