#include "coa/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "coa/discretize.hpp"
#include "coa/eigensolver.hpp"
#include "coa/errors.hpp"
#include "coa/summation.hpp"

namespace coa {

std::string_view check_status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

bool ValidationReport::all_passed() const {
  return std::all_of(entries.begin(), entries.end(), [](const auto& e) {
    return e.status == CheckStatus::Pass;
  });
}

bool ValidationReport::any_failed() const {
  return std::any_of(entries.begin(), entries.end(), [](const auto& e) {
    return e.status == CheckStatus::Fail;
  });
}

const ValidationEntry* ValidationReport::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

ValidationReport validate_model(const ModelSpec& model, int level,
                                std::size_t base_cells,
                                const ValidationOptions& opts) {
  ValidationReport report;
  const Partition grid = level_partition(model.domain, base_cells, level);
  const std::size_t n = grid.size();
  const auto& u = model.kernel;

  // U1: sampled nonnegativity of the kernel.
  {
    double min_u = std::numeric_limits<double>::infinity();
    bool nan_seen = false;
    for (std::size_t k = 0; k < n && !nan_seen; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        const double v = u(grid.points[k], grid.points[l]);
        if (std::isnan(v)) {
          nan_seen = true;
          break;
        }
        min_u = std::min(min_u, v);
      }
    if (nan_seen)
      report.entries.push_back({"U1", CheckStatus::Fail, 0.0, "kernel sample is NaN"});
    else
      report.entries.push_back({"U1",
                                min_u >= 0.0 ? CheckStatus::Pass : CheckStatus::Fail,
                                min_u, "grid minimum of u"});
  }

  // The remaining checks need the loss function; a (U2) violation during its
  // construction downgrades them to inconclusive.
  LossFunction loss;
  bool have_loss = true;
  std::string loss_note;
  try {
    LossOptions lo;
    lo.truncation_level = level;
    lo.u1_cap = opts.u1_cap;
    loss = loss_function(model, static_cast<std::size_t>(opts.essinf_factor) * n, lo);
  } catch (const InvalidModelError& e) {
    have_loss = false;
    loss_note = e.what();
  }

  // U2: sampled boundedness of u1 on the level grid.
  if (!have_loss) {
    report.entries.push_back({"U2", CheckStatus::Fail, opts.u1_cap, loss_note});
  } else {
    double max_u1 = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      max_u1 = std::max(max_u1, std::abs(loss.u1(grid.points[k])));
    report.entries.push_back({"U2",
                              max_u1 <= opts.u1_cap ? CheckStatus::Pass : CheckStatus::Fail,
                              max_u1, "grid maximum of u1"});
  }

  // U4: Hille-Tamarkin norm of K_alpha at alpha = 1.
  if (!have_loss) {
    report.entries.push_back(
        {"U4", CheckStatus::Inconclusive, 0.0, "skipped: " + loss_note});
  } else {
    try {
      const double ht = hille_tamarkin_norm(
          model.kernel, [&](double x) { return loss.w(x); }, 1.0, grid);
      report.entries.push_back({"U4",
                                std::isfinite(ht) ? CheckStatus::Pass : CheckStatus::Fail,
                                ht, "grid estimate of the K_1 norm"});
    } catch (const Error& e) {
      report.entries.push_back({"U4", CheckStatus::Fail, 0.0, e.what()});
    }
  }

  // T1: grid essinf of w is zero by construction; verify within tolerance.
  std::vector<double> w_vals;
  if (!have_loss) {
    report.entries.push_back(
        {"T1", CheckStatus::Inconclusive, 0.0, "skipped: " + loss_note});
  } else {
    const Partition& fine = loss.grid().partition;
    double min_w = std::numeric_limits<double>::infinity();
    for (double x : fine.points) min_w = std::min(min_w, loss.w(x));
    const bool ok = min_w >= -opts.essinf_tol && min_w <= opts.essinf_tol;
    report.entries.push_back({"T1", ok ? CheckStatus::Pass : CheckStatus::Fail,
                              min_w, "grid minimum of w"});
    w_vals.resize(n);
    for (std::size_t k = 0; k < n; ++k) w_vals[k] = loss.w(grid.points[k]);
  }

  // Irreducibility: strong connectivity of the sampled support graph.
  {
    Matrix support(n, n);
    bool nan_seen = false;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t l = 0; l < n; ++l) {
        const double v = u(grid.points[k], grid.points[l]);
        support(k, l) = std::isnan(v) ? 0.0 : std::max(v, 0.0);
        nan_seen = nan_seen || std::isnan(v);
      }
    const bool connected = !nan_seen && is_irreducible(support);
    report.entries.push_back({"irreducibility",
                              connected ? CheckStatus::Pass : CheckStatus::Fail,
                              connected ? 1.0 : 0.0,
                              "strong connectivity of the u > 0 graph"});
  }

  // Cusp: q_cusp = (min of u over J*) * sum over J* of alpha / max(w, floor),
  // with J* the contiguous band of cells around argmin w where w stays within
  // 10% of the grid range above the minimum.
  if (!have_loss) {
    report.entries.push_back(
        {"cusp", CheckStatus::Inconclusive, 0.0, "skipped: " + loss_note});
  } else {
    const std::size_t k_min =
        std::min_element(w_vals.begin(), w_vals.end()) - w_vals.begin();
    const double w_min = w_vals[k_min];
    const double w_max = *std::max_element(w_vals.begin(), w_vals.end());
    const double band = w_min + 0.1 * (w_max - w_min);
    std::size_t j_lo = k_min, j_hi = k_min;
    while (j_lo > 0 && w_vals[j_lo - 1] <= band) --j_lo;
    while (j_hi + 1 < n && w_vals[j_hi + 1] <= band) ++j_hi;

    double integral = 0.0;
    for (std::size_t k = j_lo; k <= j_hi; ++k)
      integral += grid.weight(k) / std::max(w_vals[k], opts.cusp_floor);
    double min_u = std::numeric_limits<double>::infinity();
    for (std::size_t k = j_lo; k <= j_hi; ++k)
      for (std::size_t l = j_lo; l <= j_hi; ++l)
        min_u = std::min(min_u, u(grid.points[k], grid.points[l]));

    if (integral > opts.divergence_cap) {
      report.entries.push_back({"cusp", CheckStatus::Pass, integral,
                                "integral of 1/w over J* exceeds the divergence cap"});
    } else {
      const double q_cusp = min_u * integral;
      CheckStatus st = CheckStatus::Fail;
      if (q_cusp > 1.1)
        st = CheckStatus::Pass;
      else if (q_cusp >= 0.9)
        st = CheckStatus::Inconclusive;
      report.entries.push_back(
          {"cusp", st, q_cusp, "q_cusp over the band around argmin w"});
    }
  }

  return report;
}

}  // namespace coa
