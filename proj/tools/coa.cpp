#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "coa/config.hpp"
#include "coa/errors.hpp"

namespace {

struct CommandArgs {
  std::string config_path;
  std::string out_path;
  bool seed_check = false;
};

int execute(coa::Command command, const CommandArgs& args) {
  std::ifstream is(args.config_path, std::ios::binary);
  if (!is) {
    std::cerr << "cannot read config file: " << args.config_path << "\n";
    return 1;
  }
  std::ostringstream buf;
  buf << is.rdbuf();

  coa::RunConfig config;
  try {
    config = coa::parse_config(buf.str());
  } catch (const coa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (args.seed_check) {
      // Determinism check: run twice without touching the filesystem and
      // require byte-identical artifacts before writing anything.
      coa::RunConfig quiet = config;
      quiet.output_path.clear();
      const coa::RunResult first = coa::run_command(quiet, command);
      const coa::RunResult second = coa::run_command(quiet, command);
      if (first.artifact != second.artifact || first.exit_code != second.exit_code) {
        std::cerr << "determinism check failed: artifacts differ between runs\n";
        return 3;
      }
      std::cerr << "determinism check passed\n";
    }

    const coa::RunResult result = coa::run_command(config, command, args.out_path);
    if (!result.message.empty()) std::cerr << result.message << "\n";
    const std::string path =
        !args.out_path.empty() ? args.out_path : config.output_path;
    if (path.empty() && !result.artifact.empty()) std::cout << result.artifact;
    return result.exit_code;
  } catch (const coa::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const coa::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mutation-selection equilibrium solver for continuum-of-alleles models"};
  app.require_subcommand(1);

  const std::pair<const char*, const char*> commands[] = {
      {"solve", "Solve one discretized eigenproblem"},
      {"converge", "Run a refinement study over nested levels"},
      {"validate", "Check model conditions on the discretization grid"},
      {"maxp", "Tabulate the maximum-principle gap over a nu ladder"},
  };

  CommandArgs args;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", args.config_path, "Run configuration (JSON)")
        ->required();
    sub->add_option("--out", args.out_path,
                    "Output path (overrides the config's output.path)");
    sub->add_flag("--seed-check", args.seed_check,
                  "Run twice and require byte-identical artifacts");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string name = app.get_subcommands().front()->get_name();
  return execute(coa::command_from_name(name), args);
}
