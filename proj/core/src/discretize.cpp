#include "coa/discretize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ostream>
#include <string>

#include "coa/errors.hpp"
#include "coa/format.hpp"
#include "coa/summation.hpp"

namespace coa {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::Nystrom: return "nystrom";
    case Method::GalerkinSampled: return "galerkin-sampled";
    case Method::GalerkinAveraged: return "galerkin-averaged";
  }
  return "unknown";
}

Method method_from_name(std::string_view name) {
  if (name == "nystrom") return Method::Nystrom;
  if (name == "galerkin-sampled") return Method::GalerkinSampled;
  if (name == "galerkin-averaged") return Method::GalerkinAveraged;
  throw InvalidArgumentError("unknown method: " + std::string(name));
}

std::size_t max_matrix_cells() {
  if (const char* env = std::getenv("COA_MAX_N")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 8192;
}

double StepDensity::induced_norm() const {
  std::vector<double> terms(values.size());
  for (std::size_t k = 0; k < values.size(); ++k)
    terms[k] = partition.weight(k) * std::abs(values[k]);
  return pairwise_sum(terms);
}

namespace {

void check_cap(const Partition& p) {
  const std::size_t cap = max_matrix_cells();
  if (p.size() > cap)
    throw InvalidArgumentError("partition has " + std::to_string(p.size()) +
                               " cells, above the cap of " + std::to_string(cap) +
                               " (set COA_MAX_N to override)");
}

double checked_sample(double v, std::size_t k, std::size_t l, const char* what) {
  if (!std::isfinite(v))
    throw AssemblyError(std::string("non-finite ") + what + " sample at (" +
                            std::to_string(k) + ", " + std::to_string(l) + ")",
                        k, l);
  return v;
}

}  // namespace

DiscreteOperator nystrom_matrices(const ModelSpec& model,
                                  const LossFunction& loss,
                                  const Partition& partition) {
  partition.validate();
  check_cap(partition);
  const std::size_t n = partition.size();
  DiscreteOperator op;
  op.partition = partition;
  op.method = Method::Nystrom;
  op.shift = loss.shift();
  op.w_diag.resize(n);
  op.r_samples.resize(n);
  op.u_matrix = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = partition.points[k];
    op.w_diag[k] = checked_sample(loss.w(t), k, k, "w");
    op.r_samples[k] = checked_sample(model.fitness(t), k, k, "r");
  }
  for (std::size_t k = 0; k < n; ++k) {
    double* row = op.u_matrix.row(k);
    const double tk = partition.points[k];
    for (std::size_t l = 0; l < n; ++l)
      row[l] = partition.weight(l) *
               checked_sample(model.kernel(tk, partition.points[l]), k, l, "u");
  }
  return op;
}

DiscreteOperator galerkin_matrices(const ModelSpec& model,
                                   const LossFunction& loss,
                                   const Partition& partition, Method variant,
                                   int sub_quadrature) {
  if (variant == Method::GalerkinSampled) {
    DiscreteOperator op = nystrom_matrices(model, loss, partition);
    op.method = Method::GalerkinSampled;
    return op;
  }
  if (variant != Method::GalerkinAveraged)
    throw InvalidArgumentError("galerkin variant must be sampled or averaged");
  if (sub_quadrature < 1)
    throw InvalidArgumentError("sub_quadrature must be at least 1");

  partition.validate();
  check_cap(partition);
  const std::size_t n = partition.size();
  const std::size_t s = static_cast<std::size_t>(sub_quadrature);

  DiscreteOperator op;
  op.partition = partition;
  op.method = Method::GalerkinAveraged;
  op.shift = loss.shift();
  op.w_diag.resize(n);
  op.r_samples.resize(n);
  op.u_matrix = Matrix(n, n);

  // s midpoints per cell, reused for both axes of the double integrals.
  std::vector<double> sub(n * s);
  for (std::size_t k = 0; k < n; ++k) {
    const double h = partition.weight(k);
    for (std::size_t j = 0; j < s; ++j)
      sub[k * s + j] =
          partition.edges[k] + h * ((static_cast<double>(j) + 0.5) / static_cast<double>(s));
  }

  const double inv_s = 1.0 / static_cast<double>(s);
  const double inv_s2 = inv_s * inv_s;
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < s; ++j)
      acc += checked_sample(loss.w(sub[k * s + j]), k, k, "w");
    op.w_diag[k] = acc * inv_s;
    op.r_samples[k] = checked_sample(model.fitness(partition.points[k]), k, k, "r");
  }
  for (std::size_t k = 0; k < n; ++k) {
    double* row = op.u_matrix.row(k);
    for (std::size_t l = 0; l < n; ++l) {
      double acc = 0.0;
      for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = 0; j < s; ++j)
          acc += checked_sample(model.kernel(sub[k * s + i], sub[l * s + j]), k, l, "u");
      row[l] = partition.weight(l) * acc * inv_s2;
    }
  }
  return op;
}

Matrix k_alpha_matrix(const DiscreteOperator& op, double alpha) {
  const std::size_t n = op.size();
  const double min_w = *std::min_element(op.w_diag.begin(), op.w_diag.end());
  if (!(alpha > -min_w))
    throw PoleError("alpha must exceed -min_k w(t_k) = " + std::to_string(-min_w));
  Matrix k(n, n);
  std::vector<double> inv_denom(n);
  for (std::size_t l = 0; l < n; ++l) inv_denom[l] = 1.0 / (op.w_diag[l] + alpha);
  for (std::size_t i = 0; i < n; ++i) {
    const double* src = op.u_matrix.row(i);
    double* dst = k.row(i);
    for (std::size_t l = 0; l < n; ++l) dst[l] = src[l] * inv_denom[l];
  }
  return k;
}

StepDensity embed_density(const Partition& partition, std::vector<double> values,
                          double* normalization) {
  if (values.size() != partition.size())
    throw InvalidArgumentError("density length must match the partition");
  StepDensity d{partition, std::move(values)};
  const double norm = d.induced_norm();
  if (norm == 0.0 || !std::isfinite(norm))
    throw DegenerateDensityError("cannot normalize an all-zero density");
  for (double& v : d.values) v /= norm;
  if (normalization) *normalization = norm;
  return d;
}

double tv_distance(const StepDensity& d1, const StepDensity& d2) {
  d1.partition.validate();
  d2.partition.validate();
  const std::vector<double>& e1 = d1.partition.edges;
  const std::vector<double>& e2 = d2.partition.edges;

  // Overlay of the two breakpoint sets; each density is zero outside its
  // coverage, so any two interval partitions have this common refinement.
  std::vector<double> cuts;
  cuts.reserve(e1.size() + e2.size());
  std::merge(e1.begin(), e1.end(), e2.begin(), e2.end(), std::back_inserter(cuts));
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::vector<double> terms;
  terms.reserve(cuts.size());
  std::size_t i1 = 0, i2 = 0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double lo = cuts[c], hi = cuts[c + 1];
    const double mid = 0.5 * (lo + hi);
    while (i1 < d1.values.size() && e1[i1 + 1] <= mid) ++i1;
    while (i2 < d2.values.size() && e2[i2 + 1] <= mid) ++i2;
    const double v1 =
        (i1 < d1.values.size() && mid >= e1[i1] && mid < e1[i1 + 1]) ? d1.values[i1] : 0.0;
    const double v2 =
        (i2 < d2.values.size() && mid >= e2[i2] && mid < e2[i2 + 1]) ? d2.values[i2] : 0.0;
    terms.push_back((hi - lo) * std::abs(v1 - v2));
  }
  return 0.5 * pairwise_sum(terms);
}

void write_operator(std::ostream& os, const DiscreteOperator& op) {
  const std::size_t n = op.size();
  os << n << ' ' << method_name(op.method) << ' ' << format_g17(op.shift) << '\n';
  for (std::size_t k = 0; k < n; ++k) {
    const double* row = op.u_matrix.row(k);
    for (std::size_t l = 0; l < n; ++l)
      os << (l ? " " : "") << format_g17(row[l]);
    os << '\n';
  }
  for (std::size_t k = 0; k < n; ++k)
    os << (k ? " " : "") << format_g17(op.w_diag[k]);
  os << '\n';
  for (std::size_t k = 0; k < n; ++k)
    os << (k ? " " : "") << format_g17(op.r_samples[k]);
  os << '\n';
}

}  // namespace coa
