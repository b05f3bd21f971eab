#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "coa/domain.hpp"

namespace coa {

/// Partition of an interval into half-open cells [edges[k], edges[k+1]) with
/// one point per cell. Quadrature weights are the cell widths.
struct Partition {
  std::vector<double> edges;   // size()+1 ascending breakpoints
  std::vector<double> points;  // t_k inside cell k
  int level = 0;

  std::size_t size() const { return points.size(); }
  double weight(std::size_t k) const { return edges[k + 1] - edges[k]; }
  double lower() const { return edges.front(); }
  double upper() const { return edges.back(); }
  double covered_length() const { return edges.back() - edges.front(); }

  /// Throws InvalidArgumentError on unsorted edges, points outside their
  /// cell, or empty cells.
  void validate() const;
};

/// Q_n f = sum_k alpha_k f(t_k) over the backing partition.
struct QuadratureRule {
  Partition partition;
  std::size_t size() const { return partition.size(); }
};

/// N equal cells over [a, b], points at cell midpoints.
Partition uniform_partition(double a, double b, std::size_t cells);

/// Partition with the given breakpoints; points default to cell midpoints.
Partition partition_from_edges(std::vector<double> edges);

/// Partition at a refinement level: base_cells * 2^level cells over the fixed
/// interval (compact) or over [-L(level), L(level)] (real line).
Partition level_partition(const Domain& domain, std::size_t base_cells,
                          int level);

/// Halves every cell. On real-line domains the coverage is also extended to
/// +-L(level+1), rounded to whole cells of the new width.
Partition refine(const Partition& p, const Domain& domain);

/// Throws EvaluationError (with the node index) if f is non-finite anywhere.
double apply(const QuadratureRule& rule, const std::function<double(double)>& f);

double mesh_width(const Partition& p);

/// Pairwise sum of the weights; equals the covered length up to rounding.
double weight_sum(const Partition& p);

}  // namespace coa
