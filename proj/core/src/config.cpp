#include "coa/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "coa/errors.hpp"
#include "coa/format.hpp"
#include "coa/maxprinciple.hpp"

namespace coa {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void syntax_error(const std::string& text, std::size_t byte,
                               const std::string& detail) {
  int line = 1, column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  std::ostringstream os;
  os << "syntax error at line " << line << ", column " << column << ": "
     << detail;
  throw ConfigError(os.str(), line, column);
}

void reject_unknown_keys(const json& node, const std::string& path,
                         const std::set<std::string>& allowed) {
  for (const auto& [key, value] : node.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown key: " + (path.empty() ? key : path + "." + key));
  }
}

double require_number(const json& node, const std::string& path) {
  if (!node.is_number())
    throw ConfigError(path + " must be a number");
  return node.get<double>();
}

double positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError(path + " must be positive");
  return v;
}

const std::set<std::string> kFitnessForms{"constant", "linear", "quadratic",
                                          "gaussian", "table"};
const std::set<std::string> kKernelForms{
    "gaussian-difference", "house-of-cards", "exponential-tilted",
    "regularized-gamma", "box"};

void parse_model(const json& node, RunConfig& cfg) {
  reject_unknown_keys(node, "model", {"domain", "fitness", "kernel"});
  if (!node.contains("domain")) throw ConfigError("model.domain is required");
  if (!node.contains("fitness")) throw ConfigError("model.fitness is required");
  if (!node.contains("kernel")) throw ConfigError("model.kernel is required");

  const json& dom = node.at("domain");
  reject_unknown_keys(dom, "model.domain", {"kind", "a", "b", "l0"});
  cfg.domain_kind = dom.value("kind", std::string("compact"));
  if (cfg.domain_kind == "compact") {
    if (!dom.contains("a") || !dom.contains("b"))
      throw ConfigError("model.domain needs a and b for a compact interval");
    cfg.domain_a = require_number(dom.at("a"), "model.domain.a");
    cfg.domain_b = require_number(dom.at("b"), "model.domain.b");
    if (!(cfg.domain_a < cfg.domain_b))
      throw ConfigError("model.domain requires a < b");
  } else if (cfg.domain_kind == "real-line") {
    cfg.domain_l0 = dom.contains("l0")
                        ? positive(require_number(dom.at("l0"), "model.domain.l0"),
                                   "model.domain.l0")
                        : 4.0;
  } else {
    throw ConfigError("model.domain.kind must be compact or real-line");
  }

  const json& fit = node.at("fitness");
  reject_unknown_keys(fit, "model.fitness", {"form", "params"});
  cfg.fitness_form = fit.value("form", std::string());
  if (!kFitnessForms.count(cfg.fitness_form))
    throw ConfigError("model.fitness.form must be one of constant, linear, "
                      "quadratic, gaussian, table");
  if (fit.contains("params")) {
    const json& p = fit.at("params");
    for (const auto& [key, value] : p.items()) {
      if (cfg.fitness_form == "table") {
        if (key != "points") throw ConfigError("unknown key: model.fitness.params." + key);
        if (!value.is_array())
          throw ConfigError("model.fitness.params.points must be an array of [x, r] pairs");
        for (const auto& pair : value) {
          if (!pair.is_array() || pair.size() != 2)
            throw ConfigError("model.fitness.params.points must be an array of [x, r] pairs");
          cfg.fitness_table.emplace_back(pair[0].get<double>(), pair[1].get<double>());
        }
      } else {
        cfg.fitness_params[key] = require_number(value, "model.fitness.params." + key);
      }
    }
  }

  const json& ker = node.at("kernel");
  reject_unknown_keys(ker, "model.kernel", {"form", "params"});
  cfg.kernel_form = ker.value("form", std::string());
  if (!kKernelForms.count(cfg.kernel_form))
    throw ConfigError("model.kernel.form must be one of gaussian-difference, "
                      "house-of-cards, exponential-tilted, regularized-gamma, box");
  if (ker.contains("params"))
    for (const auto& [key, value] : ker.at("params").items())
      cfg.kernel_params[key] = require_number(value, "model.kernel.params." + key);

  // Semantic checks on the common parameters.
  const auto check_positive = [&](const char* name) {
    const auto it = cfg.kernel_params.find(name);
    if (it != cfg.kernel_params.end() && !(it->second > 0.0))
      throw ConfigError("kernel.params." + std::string(name) + " must be positive");
  };
  check_positive("sigma");
  check_positive("d");
  check_positive("epsilon");
  const auto mu = cfg.kernel_params.find("mu");
  if (mu != cfg.kernel_params.end() && mu->second < 0.0)
    throw ConfigError("kernel.params.mu must be nonnegative");
}

double param_or(const std::map<std::string, double>& params,
                const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

double required_param(const std::map<std::string, double>& params,
                      const std::string& key, const std::string& path) {
  const auto it = params.find(key);
  if (it == params.end()) throw ConfigError(path + "." + key + " is required");
  return it->second;
}

}  // namespace

ModelSpec RunConfig::build_model() const {
  ModelSpec model;
  model.domain = domain_kind == "compact" ? Domain::compact(domain_a, domain_b)
                                          : Domain::real_line(domain_l0);

  if (fitness_form == "constant") {
    model.fitness = FitnessProfile::constant(param_or(fitness_params, "r0", 0.0));
  } else if (fitness_form == "linear") {
    model.fitness = FitnessProfile::linear(param_or(fitness_params, "r0", 0.0),
                                           param_or(fitness_params, "slope", 1.0));
  } else if (fitness_form == "quadratic") {
    model.fitness = FitnessProfile::quadratic(param_or(fitness_params, "r0", 1.0),
                                              param_or(fitness_params, "s", 1.0));
  } else if (fitness_form == "gaussian") {
    model.fitness = FitnessProfile::gaussian_peak(param_or(fitness_params, "r0", 1.0),
                                                  param_or(fitness_params, "s", 1.0));
  } else if (fitness_form == "table") {
    model.fitness = FitnessProfile::table(fitness_table);
  } else {
    throw ConfigError("model.fitness.form is not set");
  }

  const std::string kp = "model.kernel.params";
  if (kernel_form == "gaussian-difference") {
    model.kernel = MutationKernel::gaussian_difference(
        param_or(kernel_params, "mu", 1.0), required_param(kernel_params, "sigma", kp));
  } else if (kernel_form == "house-of-cards") {
    model.kernel = MutationKernel::house_of_cards_uniform(
        param_or(kernel_params, "mu", 1.0), required_param(kernel_params, "m", kp));
  } else if (kernel_form == "exponential-tilted") {
    const double mu = param_or(kernel_params, "mu", 1.0);
    const double sigma = required_param(kernel_params, "sigma", kp);
    if (!(sigma > 0.0)) throw ConfigError("kernel.params.sigma must be positive");
    const double gamma = param_or(kernel_params, "gamma", 0.0);
    constexpr double kSqrt2Pi = 2.5066282746310002;
    model.kernel = MutationKernel::exponential_tilted(
        gamma, [mu, sigma, kSqrt2Pi](double z) {
          const double s = z / sigma;
          return mu * std::exp(-0.5 * s * s) / (sigma * kSqrt2Pi);
        });
  } else if (kernel_form == "regularized-gamma") {
    model.kernel = MutationKernel::regularized_gamma(
        param_or(kernel_params, "mu", 1.0),
        required_param(kernel_params, "theta", kp),
        required_param(kernel_params, "d", kp),
        param_or(kernel_params, "epsilon", 1e-3));
  } else if (kernel_form == "box") {
    model.kernel = MutationKernel::box(param_or(kernel_params, "mu", 1.0),
                                       required_param(kernel_params, "x_lo", kp),
                                       required_param(kernel_params, "x_hi", kp),
                                       required_param(kernel_params, "y_lo", kp),
                                       required_param(kernel_params, "y_hi", kp));
  } else {
    throw ConfigError("model.kernel.form is not set");
  }
  return model;
}

SolverConfig RunConfig::solver_config() const {
  SolverConfig cfg;
  cfg.tol = solver_tol;
  cfg.max_iterations = solver_max_iterations;
  return cfg;
}

StudyOptions RunConfig::study_options() const {
  StudyOptions opts;
  opts.base_cells = base_cells;
  opts.essinf_factor = essinf_factor;
  opts.sub_quadrature = sub_quadrature;
  opts.u1_cap = validation_u1_cap;
  return opts;
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    syntax_error(text, e.byte > 0 ? e.byte - 1 : 0, e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");

  reject_unknown_keys(doc, "",
                      {"model", "method", "levels", "base_cells", "solver",
                       "output", "sub_quadrature", "essinf_factor",
                       "validation", "maxp"});

  RunConfig cfg;
  if (!doc.contains("model")) throw ConfigError("model is required");
  parse_model(doc.at("model"), cfg);

  if (doc.contains("method")) {
    try {
      cfg.method = method_from_name(doc.at("method").get<std::string>());
    } catch (const InvalidArgumentError&) {
      throw ConfigError("method must be nystrom, galerkin-sampled or galerkin-averaged");
    }
  } else {
    // Nystrom on compact intervals, the sampled Galerkin variant otherwise;
    // both assemble the same matrices.
    cfg.method = cfg.domain_kind == "compact" ? Method::Nystrom
                                              : Method::GalerkinSampled;
  }

  if (doc.contains("levels")) {
    const json& lv = doc.at("levels");
    reject_unknown_keys(lv, "levels", {"base", "count"});
    if (lv.contains("base")) cfg.level_base = lv.at("base").get<int>();
    if (lv.contains("count")) cfg.level_count = lv.at("count").get<int>();
    if (cfg.level_base < 0) throw ConfigError("levels.base must be nonnegative");
    if (cfg.level_count < 1) throw ConfigError("levels.count must be at least 1");
  }

  if (doc.contains("base_cells")) {
    const long long v = doc.at("base_cells").get<long long>();
    if (v < 1) throw ConfigError("base_cells must be positive");
    cfg.base_cells = static_cast<std::size_t>(v);
  }

  if (doc.contains("solver")) {
    const json& sv = doc.at("solver");
    reject_unknown_keys(sv, "solver", {"tol", "max_iterations"});
    if (sv.contains("tol"))
      cfg.solver_tol = positive(require_number(sv.at("tol"), "solver.tol"), "solver.tol");
    if (sv.contains("max_iterations")) {
      cfg.solver_max_iterations = sv.at("max_iterations").get<long>();
      if (cfg.solver_max_iterations < 1)
        throw ConfigError("solver.max_iterations must be positive");
    }
  }

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    reject_unknown_keys(out, "output", {"path", "format"});
    cfg.output_path = out.value("path", std::string());
    cfg.output_format = out.value("format", std::string("csv"));
    if (cfg.output_format != "csv" && cfg.output_format != "json")
      throw ConfigError("output.format must be csv or json");
  }

  if (doc.contains("sub_quadrature")) {
    cfg.sub_quadrature = doc.at("sub_quadrature").get<int>();
    if (cfg.sub_quadrature < 1) throw ConfigError("sub_quadrature must be positive");
  }
  if (doc.contains("essinf_factor")) {
    cfg.essinf_factor = doc.at("essinf_factor").get<int>();
    if (cfg.essinf_factor < 1) throw ConfigError("essinf_factor must be positive");
  }

  if (doc.contains("validation")) {
    const json& va = doc.at("validation");
    reject_unknown_keys(va, "validation", {"essinf_tol", "u1_cap"});
    if (va.contains("essinf_tol"))
      cfg.validation_essinf_tol = positive(
          require_number(va.at("essinf_tol"), "validation.essinf_tol"),
          "validation.essinf_tol");
    if (va.contains("u1_cap"))
      cfg.validation_u1_cap = positive(
          require_number(va.at("u1_cap"), "validation.u1_cap"), "validation.u1_cap");
  }

  if (doc.contains("maxp")) {
    const json& mp = doc.at("maxp");
    reject_unknown_keys(mp, "maxp", {"nu", "sigma_h"});
    if (mp.contains("nu")) {
      if (!mp.at("nu").is_array()) throw ConfigError("maxp.nu must be an array");
      for (const auto& v : mp.at("nu"))
        cfg.maxp_nu.push_back(positive(v.get<double>(), "maxp.nu"));
    }
    if (mp.contains("sigma_h"))
      cfg.maxp_sigma_h = positive(
          require_number(mp.at("sigma_h"), "maxp.sigma_h"), "maxp.sigma_h");
  }

  return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
  json doc;
  json dom;
  dom["kind"] = cfg.domain_kind;
  if (cfg.domain_kind == "compact") {
    dom["a"] = cfg.domain_a;
    dom["b"] = cfg.domain_b;
  } else {
    dom["l0"] = cfg.domain_l0;
  }
  json fit;
  fit["form"] = cfg.fitness_form;
  if (cfg.fitness_form == "table") {
    json pts = json::array();
    for (const auto& [x, r] : cfg.fitness_table) pts.push_back({x, r});
    fit["params"]["points"] = pts;
  } else if (!cfg.fitness_params.empty()) {
    for (const auto& [k, v] : cfg.fitness_params) fit["params"][k] = v;
  }
  json ker;
  ker["form"] = cfg.kernel_form;
  for (const auto& [k, v] : cfg.kernel_params) ker["params"][k] = v;

  doc["model"] = {{"domain", dom}, {"fitness", fit}, {"kernel", ker}};
  doc["method"] = std::string(method_name(cfg.method));
  doc["levels"] = {{"base", cfg.level_base}, {"count", cfg.level_count}};
  doc["base_cells"] = cfg.base_cells;
  doc["solver"] = {{"tol", cfg.solver_tol},
                   {"max_iterations", cfg.solver_max_iterations}};
  doc["output"] = {{"path", cfg.output_path}, {"format", cfg.output_format}};
  doc["sub_quadrature"] = cfg.sub_quadrature;
  doc["essinf_factor"] = cfg.essinf_factor;
  doc["validation"] = {{"essinf_tol", cfg.validation_essinf_tol},
                       {"u1_cap", cfg.validation_u1_cap}};
  if (!cfg.maxp_nu.empty() || cfg.maxp_sigma_h > 0.0) {
    json mp;
    if (!cfg.maxp_nu.empty()) mp["nu"] = cfg.maxp_nu;
    if (cfg.maxp_sigma_h > 0.0) mp["sigma_h"] = cfg.maxp_sigma_h;
    doc["maxp"] = mp;
  }
  return doc.dump(2) + "\n";
}

Command command_from_name(std::string_view name) {
  if (name == "solve") return Command::Solve;
  if (name == "converge") return Command::Converge;
  if (name == "validate") return Command::Validate;
  if (name == "maxp") return Command::Maxp;
  throw ConfigError("unknown command: " + std::string(name));
}

namespace {

json solve_record_json(const LevelRecord& r) {
  json row;
  row["level"] = r.level;
  row["N"] = r.n;
  row["lambda_shifted"] = r.lambda_shifted;
  row["lambda_raw"] = r.lambda_raw;
  row["residual_A"] = r.residual_a;
  row["residual_K"] = r.residual_k;
  row["mean_fitness_gap"] = r.mean_fitness_gap;
  row["tv_prev"] = r.tv_prev;
  row["tail_mass"] = r.tail_mass;
  return row;
}

LevelRecord outcome_record(const SolveOutcome& out) {
  LevelRecord rec;
  rec.level = out.level;
  rec.n = out.op.size();
  rec.lambda_shifted = out.result.lambda_shifted;
  rec.lambda_raw = out.result.lambda_raw;
  rec.residual_a = out.result.residual_a;
  rec.residual_k = out.result.residual_k;
  rec.mean_fitness_gap = out.mean_fitness_gap;
  rec.tv_prev = 0.0;
  rec.tail_mass = out.tail_mass;
  return rec;
}

std::string csv_of_record(const LevelRecord& r) {
  ConvergenceReport one;
  one.levels.push_back(r);
  return to_csv(one);
}

std::string validation_csv(const ValidationReport& report) {
  std::ostringstream os;
  os << "name,status,witness,note\n";
  for (const auto& e : report.entries)
    os << e.name << ',' << check_status_name(e.status) << ','
       << format_g17(e.witness) << ',' << e.note << '\n';
  return os.str();
}

json validation_json(const ValidationReport& report) {
  json rows = json::array();
  for (const auto& e : report.entries) {
    json row;
    row["name"] = e.name;
    row["status"] = std::string(check_status_name(e.status));
    row["witness"] = e.witness;
    row["note"] = e.note;
    rows.push_back(row);
  }
  return rows;
}

json locality_json(const LocalityTable& table) {
  json rows = json::array();
  for (const auto& r : table.rows) {
    json row;
    row["nu"] = r.nu;
    row["level"] = r.level;
    row["N"] = r.n;
    row["lambda_raw"] = r.lambda_raw;
    row["lambda_mp"] = r.lambda_mp;
    row["gap"] = r.gap;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

RunResult run_command(const RunConfig& config, Command command,
                      const std::string& out_override) {
  RunResult result;
  const bool as_json = config.output_format == "json";

  try {
    const ModelSpec model = config.build_model();
    const SolverConfig solver = config.solver_config();
    const StudyOptions opts = config.study_options();

    switch (command) {
      case Command::Solve: {
        const SolveOutcome out =
            solve_model(model, config.method, config.level_base, solver, opts);
        const LevelRecord rec = outcome_record(out);
        result.artifact =
            as_json ? solve_record_json(rec).dump(2) + "\n" : csv_of_record(rec);
        result.message = "lambda_raw = " + format_g17(rec.lambda_raw);
        break;
      }
      case Command::Converge: {
        if (config.level_count < 2)
          throw ConfigError("converge needs levels.count >= 2");
        const ConvergenceReport report = refinement_study(
            model, config.method, config.level_base, config.level_count, solver, opts);
        if (as_json) {
          json rows = json::array();
          for (const auto& r : report.levels) rows.push_back(solve_record_json(r));
          json doc;
          doc["rows"] = rows;
          doc["method"] = report.method;
          doc["tail_flagged"] = report.tail_flagged;
          result.artifact = doc.dump(2) + "\n";
        } else {
          result.artifact = to_csv(report);
        }
        if (report.tail_flagged)
          result.message = "warning: tail mass above threshold at the final level";
        break;
      }
      case Command::Validate: {
        const int level = config.level_base + config.level_count - 1;
        const ValidationReport report =
            validate_model(model, level, config.base_cells,
                           {config.validation_essinf_tol, config.validation_u1_cap,
                            config.essinf_factor});
        result.artifact = as_json ? validation_json(report).dump(2) + "\n"
                                  : validation_csv(report);
        if (report.any_failed()) {
          result.exit_code = 2;
          result.message = "model validation failed";
        }
        break;
      }
      case Command::Maxp: {
        if (config.maxp_nu.empty())
          throw ConfigError("maxp.nu is required for the maxp command");
        double width = config.maxp_sigma_h;
        if (width <= 0.0) {
          const auto it = config.kernel_params.find("sigma");
          if (it == config.kernel_params.end())
            throw ConfigError("maxp.sigma_h is required when the kernel has no sigma");
          width = it->second;
        }
        const double gamma = param_or(config.kernel_params, "gamma", 0.0);
        const double mu = param_or(config.kernel_params, "mu", 1.0);
        const double sigma = required_param(config.kernel_params, "sigma",
                                            "model.kernel.params");
        constexpr double kSqrt2Pi = 2.5066282746310002;
        LocalityFamily family;
        family.domain = model.domain;
        family.fitness = model.fitness;
        family.gamma = gamma;
        family.width_scale = width;
        family.h = [mu, sigma, kSqrt2Pi](double z) {
          const double s = z / sigma;
          return mu * std::exp(-0.5 * s * s) / (sigma * kSqrt2Pi);
        };
        const LocalityTable table = locality_experiment(
            family, config.maxp_nu, config.level_base, solver, opts);
        result.artifact =
            as_json ? locality_json(table).dump(2) + "\n" : to_csv(table);
        if (!table.monotone_nonincreasing)
          result.message = "warning: gap is not monotone nonincreasing in nu";
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;  // usage errors surface to the CLI as exit code 1
  } catch (const StructuralError& e) {
    return {2, "", std::string("model validation failure: ") + e.what()};
  } catch (const InvalidModelError& e) {
    return {2, "", std::string("model validation failure: ") + e.what()};
  } catch (const Error& e) {
    return {3, "", std::string("solver failure: ") + e.what()};
  }

  const std::string path =
      !out_override.empty() ? out_override : config.output_path;
  if (!path.empty() && !result.artifact.empty()) {
    std::ofstream os(path, std::ios::binary);
    if (!os) return {3, result.artifact, "cannot write output file: " + path};
    os << result.artifact;
  }
  return result;
}

}  // namespace coa
