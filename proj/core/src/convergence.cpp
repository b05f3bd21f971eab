#include "coa/convergence.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>

#include "coa/format.hpp"
#include "coa/summation.hpp"

namespace coa {

namespace {

DiscreteOperator assemble(const ModelSpec& model, const LossFunction& loss,
                          const Partition& partition, Method method,
                          const StudyOptions& opts) {
  switch (method) {
    case Method::Nystrom:
      return nystrom_matrices(model, loss, partition);
    case Method::GalerkinSampled:
      return galerkin_matrices(model, loss, partition, Method::GalerkinSampled);
    case Method::GalerkinAveraged:
      return galerkin_matrices(model, loss, partition, Method::GalerkinAveraged,
                               opts.sub_quadrature);
  }
  throw InvalidArgumentError("unknown method");
}

double mean_fitness_gap(const DiscreteOperator& op, const EigenResult& res) {
  std::vector<double> terms(op.size());
  for (std::size_t k = 0; k < op.size(); ++k)
    terms[k] = op.partition.weight(k) * op.r_samples[k] * res.density.values[k];
  return std::abs(res.lambda_raw - pairwise_sum(terms));
}

double tail_mass(const ModelSpec& model, const DiscreteOperator& op,
                 const EigenResult& res, int level) {
  if (model.domain.is_compact()) return 0.0;
  const double half = model.domain.half_width(level) / 2.0;
  std::vector<double> terms;
  terms.reserve(op.size());
  for (std::size_t k = 0; k < op.size(); ++k)
    if (std::abs(op.partition.points[k]) > half)
      terms.push_back(op.partition.weight(k) * std::abs(res.density.values[k]));
  return pairwise_sum(terms);
}

LossFunction study_loss(const ModelSpec& model, int finest_level,
                        const StudyOptions& opts) {
  const std::size_t finest_n = opts.base_cells
                               << static_cast<unsigned>(finest_level);
  LossOptions lo;
  lo.truncation_level = finest_level;
  lo.u1_cap = opts.u1_cap;
  return loss_function(
      model, static_cast<std::size_t>(opts.essinf_factor) * finest_n, lo);
}

}  // namespace

SolveOutcome solve_model(const ModelSpec& model, Method method, int level,
                         const SolverConfig& cfg, const StudyOptions& opts) {
  const Partition partition = level_partition(model.domain, opts.base_cells, level);
  const LossFunction loss = study_loss(model, level, opts);
  SolveOutcome out;
  out.op = assemble(model, loss, partition, method, opts);
  out.result = perron_eigenpair(out.op, cfg);
  out.level = level;
  out.mean_fitness_gap = mean_fitness_gap(out.op, out.result);
  out.tail_mass = tail_mass(model, out.op, out.result, level);
  return out;
}

ConvergenceReport refinement_study(const ModelSpec& model, Method method,
                                   int base_level, int num_levels,
                                   const SolverConfig& cfg,
                                   const StudyOptions& opts) {
  if (num_levels < 2)
    throw InvalidArgumentError("a refinement study needs at least 2 levels");

  ConvergenceReport report;
  report.method = std::string(method_name(method));
  const int finest = base_level + num_levels - 1;

  // One loss function for the whole study: all levels share the same shift
  // and the same fine u1 grid at the finest truncation.
  LossFunction loss;
  try {
    loss = study_loss(model, finest, opts);
  } catch (const Error& e) {
    throw StudyError(std::string("loss construction failed: ") + e.what(),
                     std::move(report));
  }

  StepDensity previous;
  for (int level = base_level; level <= finest; ++level) {
    try {
      const Partition partition =
          level_partition(model.domain, opts.base_cells, level);
      const DiscreteOperator op = assemble(model, loss, partition, method, opts);
      const EigenResult res = perron_eigenpair(op, cfg);

      LevelRecord rec;
      rec.level = level;
      rec.n = op.size();
      rec.lambda_shifted = res.lambda_shifted;
      rec.lambda_raw = res.lambda_raw;
      rec.residual_a = res.residual_a;
      rec.residual_k = res.residual_k;
      rec.mean_fitness_gap = mean_fitness_gap(op, res);
      rec.tail_mass = tail_mass(model, op, res, level);
      if (!report.levels.empty()) {
        rec.tv_prev = tv_distance(previous, res.density);
        report.tv_consecutive.push_back(rec.tv_prev);
      }
      report.levels.push_back(rec);
      previous = res.density;
    } catch (const Error& e) {
      throw StudyError("study failed at level " + std::to_string(level) + ": " +
                           e.what(),
                       std::move(report));
    }
  }

  for (std::size_t i = 0; i + 2 < report.levels.size(); ++i) {
    const double d1 = std::abs(report.levels[i + 1].lambda_raw -
                               report.levels[i].lambda_raw);
    const double d2 = std::abs(report.levels[i + 2].lambda_raw -
                               report.levels[i + 1].lambda_raw);
    report.cauchy_ratio.push_back(d1 > 0.0 ? d2 / d1 : 0.0);
  }
  report.tail_flagged =
      !model.domain.is_compact() &&
      report.levels.back().tail_mass > opts.tail_threshold;
  return report;
}

MethodComparison cross_method_compare(const ModelSpec& model, int level,
                                      const SolverConfig& cfg,
                                      const StudyOptions& opts) {
  const Partition partition = level_partition(model.domain, opts.base_cells, level);
  const LossFunction loss = study_loss(model, level, opts);

  const Method sampled_method =
      model.domain.is_compact() ? Method::Nystrom : Method::GalerkinSampled;
  const DiscreteOperator op_s = assemble(model, loss, partition, sampled_method, opts);
  const DiscreteOperator op_a =
      assemble(model, loss, partition, Method::GalerkinAveraged, opts);

  const EigenResult res_s = perron_eigenpair(op_s, cfg);
  const EigenResult res_a = perron_eigenpair(op_a, cfg);

  MethodComparison cmp;
  cmp.lambda_sampled = res_s.lambda_raw;
  cmp.lambda_averaged = res_a.lambda_raw;
  cmp.lambda_gap = std::abs(res_s.lambda_raw - res_a.lambda_raw);
  cmp.tv_gap = tv_distance(res_s.density, res_a.density);
  return cmp;
}

OracleComparison oracle_compare(const ModelSpec& model, double lambda_star,
                                const std::function<double(double)>& density_star,
                                int level, const SolverConfig& cfg,
                                const StudyOptions& opts) {
  const Method method =
      model.domain.is_compact() ? Method::Nystrom : Method::GalerkinSampled;
  const SolveOutcome out = solve_model(model, method, level, cfg, opts);

  // Cellwise average of the oracle density with an 8-point midpoint sub-rule.
  const Partition& part = out.op.partition;
  constexpr int kSub = 8;
  std::vector<double> avg(part.size());
  for (std::size_t k = 0; k < part.size(); ++k) {
    const double h = part.weight(k);
    double acc = 0.0;
    for (int j = 0; j < kSub; ++j)
      acc += density_star(part.edges[k] + h * ((j + 0.5) / kSub));
    avg[k] = acc / kSub;
  }
  StepDensity oracle{part, std::move(avg)};

  OracleComparison cmp;
  cmp.lambda_error = std::abs(out.result.lambda_raw - lambda_star);
  cmp.tv_error = tv_distance(out.result.density, oracle);
  return cmp;
}

std::string to_csv(const ConvergenceReport& report) {
  std::ostringstream os;
  os << "level,N,lambda_shifted,lambda_raw,residual_A,residual_K,"
        "mean_fitness_gap,tv_prev,tail_mass\n";
  for (const LevelRecord& r : report.levels) {
    os << r.level << ',' << r.n << ',' << format_g17(r.lambda_shifted) << ','
       << format_g17(r.lambda_raw) << ',' << format_g17(r.residual_a) << ','
       << format_g17(r.residual_k) << ',' << format_g17(r.mean_fitness_gap)
       << ',' << format_g17(r.tv_prev) << ',' << format_g17(r.tail_mass)
       << '\n';
  }
  return os.str();
}

ConvergenceReport report_from_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) ||
      line != "level,N,lambda_shifted,lambda_raw,residual_A,residual_K,"
              "mean_fitness_gap,tv_prev,tail_mass")
    throw Error("unexpected CSV header: " + line);
  ConvergenceReport report;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    LevelRecord r;
    std::istringstream ls(line);
    std::string field;
    const auto next = [&]() {
      if (!std::getline(ls, field, ','))
        throw Error("truncated CSV row: " + line);
      return field;
    };
    r.level = std::atoi(next().c_str());
    r.n = static_cast<std::size_t>(std::strtoull(next().c_str(), nullptr, 10));
    r.lambda_shifted = std::strtod(next().c_str(), nullptr);
    r.lambda_raw = std::strtod(next().c_str(), nullptr);
    r.residual_a = std::strtod(next().c_str(), nullptr);
    r.residual_k = std::strtod(next().c_str(), nullptr);
    r.mean_fitness_gap = std::strtod(next().c_str(), nullptr);
    r.tv_prev = std::strtod(next().c_str(), nullptr);
    r.tail_mass = std::strtod(next().c_str(), nullptr);
    if (!report.levels.empty()) report.tv_consecutive.push_back(r.tv_prev);
    report.levels.push_back(r);
  }
  for (std::size_t i = 0; i + 2 < report.levels.size(); ++i) {
    const double d1 = std::abs(report.levels[i + 1].lambda_raw -
                               report.levels[i].lambda_raw);
    const double d2 = std::abs(report.levels[i + 2].lambda_raw -
                               report.levels[i + 1].lambda_raw);
    report.cauchy_ratio.push_back(d1 > 0.0 ? d2 / d1 : 0.0);
  }
  return report;
}

}  // namespace coa
