#include "coa/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "coa/errors.hpp"
#include "coa/summation.hpp"

namespace coa {

void Partition::validate() const {
  if (points.empty() || edges.size() != points.size() + 1)
    throw InvalidArgumentError("partition needs one point per cell");
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (!(edges[k] < edges[k + 1]))
      throw InvalidArgumentError("partition edges must be strictly increasing");
    if (points[k] < edges[k] || points[k] > edges[k + 1])
      throw InvalidArgumentError("partition point outside its cell");
  }
}

Partition uniform_partition(double a, double b, std::size_t cells) {
  if (cells == 0) throw InvalidArgumentError("cell count must be positive");
  if (!(a < b)) throw InvalidArgumentError("interval requires a < b");
  Partition p;
  p.edges.resize(cells + 1);
  p.points.resize(cells);
  const double len = b - a;
  for (std::size_t k = 0; k <= cells; ++k)
    p.edges[k] = a + len * (static_cast<double>(k) / static_cast<double>(cells));
  p.edges.front() = a;
  p.edges.back() = b;
  for (std::size_t k = 0; k < cells; ++k)
    p.points[k] = 0.5 * (p.edges[k] + p.edges[k + 1]);
  return p;
}

Partition partition_from_edges(std::vector<double> edges) {
  if (edges.size() < 2)
    throw InvalidArgumentError("partition needs at least one cell");
  Partition p;
  p.edges = std::move(edges);
  p.points.resize(p.edges.size() - 1);
  for (std::size_t k = 0; k + 1 < p.edges.size(); ++k)
    p.points[k] = 0.5 * (p.edges[k] + p.edges[k + 1]);
  p.validate();
  return p;
}

Partition level_partition(const Domain& domain, std::size_t base_cells,
                          int level) {
  if (base_cells == 0) throw InvalidArgumentError("base_cells must be positive");
  if (level < 0 || level > 40)
    throw InvalidArgumentError("level out of range [0, 40]");
  const std::size_t cells = base_cells << static_cast<unsigned>(level);
  Partition p = uniform_partition(domain.lower(level), domain.upper(level), cells);
  p.level = level;
  return p;
}

Partition refine(const Partition& p, const Domain& domain) {
  p.validate();
  const int next_level = p.level + 1;
  std::vector<double> edges;
  edges.reserve(2 * p.size() + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    edges.push_back(p.edges[k]);
    edges.push_back(0.5 * (p.edges[k] + p.edges[k + 1]));
  }
  edges.push_back(p.edges.back());

  if (!domain.is_compact()) {
    // Extend coverage to +-L(level+1), rounded to whole cells of the new width.
    const double h = 0.5 * mesh_width(p);
    const double target = domain.half_width(next_level);
    const auto cells_needed = [&](double boundary) {
      const double gap = target - std::abs(boundary);
      return gap <= 0.0 ? std::size_t{0}
                        : static_cast<std::size_t>(std::llround(gap / h));
    };
    const std::size_t add_right = cells_needed(edges.back());
    const std::size_t add_left = cells_needed(edges.front());
    const double right0 = edges.back();
    for (std::size_t j = 1; j <= add_right; ++j)
      edges.push_back(right0 + static_cast<double>(j) * h);
    if (add_left > 0) {
      std::vector<double> ext;
      ext.reserve(add_left);
      const double left0 = edges.front();
      for (std::size_t j = add_left; j >= 1; --j)
        ext.push_back(left0 - static_cast<double>(j) * h);
      edges.insert(edges.begin(), ext.begin(), ext.end());
    }
  }

  Partition out = partition_from_edges(std::move(edges));
  out.level = next_level;
  return out;
}

double apply(const QuadratureRule& rule, const std::function<double(double)>& f) {
  const Partition& p = rule.partition;
  std::vector<double> terms(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double v = f(p.points[k]);
    if (!std::isfinite(v))
      throw EvaluationError(
          "non-finite integrand at node " + std::to_string(k), k);
    terms[k] = p.weight(k) * v;
  }
  return pairwise_sum(terms);
}

double mesh_width(const Partition& p) {
  double m = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) m = std::max(m, p.weight(k));
  return m;
}

double weight_sum(const Partition& p) {
  std::vector<double> w(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) w[k] = p.weight(k);
  return pairwise_sum(w);
}

}  // namespace coa
