// Command-line driver: potential-scan, statics, md, budget, sweep, verify.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ringtrap/commands.hpp"
#include "ringtrap/errors.hpp"

using namespace ringtrap;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  long long seed_override = -1;
  int threads = 1;
};

void add_common(CLI::App* sub, CommonArgs& args, bool with_threads = false) {
  sub->add_option("--config", args.config_path, "run configuration file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--out", args.out_dir, "output directory (default: from config)");
  sub->add_option("--seed", args.seed_override, "override the config seed");
  if (with_threads)
    sub->add_option("--threads", args.threads, "sweep worker threads")
        ->check(CLI::PositiveNumber);
}

RunConfig load(const CommonArgs& args, RunMode expected) {
  RunConfig cfg = load_run_config(args.config_path);
  if (cfg.mode != expected)
    throw std::runtime_error(std::string("config is for mode '") +
                             to_string(cfg.mode) + "', expected '" +
                             to_string(expected) + "'");
  if (args.seed_override >= 0) cfg.seed = static_cast<uint64_t>(args.seed_override);
  return cfg;
}

int run(const char* name, const CommandOutcome& oc) {
  std::cout << name << ": " << oc.summary << "\n";
  for (const auto& f : oc.files) std::cout << "  wrote " << f << "\n";
  return oc.exit_code;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"ring-of-ions multipole trap toolkit: equilibrium structure, "
               "laser-cooled molecular dynamics and clock shift budgets"};
  app.require_subcommand(1);

  CommonArgs scan_args, statics_args, md_args, budget_args, sweep_args, verify_args;
  auto* scan = app.add_subcommand("potential-scan",
                                  "radial potential profile and harmonic model");
  add_common(scan, scan_args);
  auto* statics = app.add_subcommand("statics", "relax an N-ion ring and classify it");
  add_common(statics, statics_args);
  auto* md = app.add_subcommand("md", "cooling/dark sequence molecular dynamics");
  add_common(md, md_args);
  auto* budget = app.add_subcommand("budget", "systematic shift budget table");
  add_common(budget, budget_args);
  auto* sweep = app.add_subcommand("sweep", "parameter sweep of statics or budget");
  add_common(sweep, sweep_args, true);
  auto* verify =
      app.add_subcommand("verify", "re-check config hashes embedded in outputs");
  add_common(verify, verify_args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (scan->parsed()) {
      const auto cfg = load(scan_args, RunMode::potential_scan);
      const auto dir = scan_args.out_dir.empty() ? cfg.output_dir : scan_args.out_dir;
      return run("potential-scan", cmd_potential_scan(cfg, dir));
    }
    if (statics->parsed()) {
      const auto cfg = load(statics_args, RunMode::statics);
      const auto dir =
          statics_args.out_dir.empty() ? cfg.output_dir : statics_args.out_dir;
      return run("statics", cmd_statics(cfg, dir));
    }
    if (md->parsed()) {
      const auto cfg = load(md_args, RunMode::md);
      const auto dir = md_args.out_dir.empty() ? cfg.output_dir : md_args.out_dir;
      return run("md", cmd_md(cfg, dir));
    }
    if (budget->parsed()) {
      const auto cfg = load(budget_args, RunMode::budget);
      const auto dir =
          budget_args.out_dir.empty() ? cfg.output_dir : budget_args.out_dir;
      return run("budget", cmd_budget(cfg, dir));
    }
    if (sweep->parsed()) {
      const auto cfg = load(sweep_args, RunMode::sweep);
      const auto dir = sweep_args.out_dir.empty() ? cfg.output_dir : sweep_args.out_dir;
      return run("sweep", cmd_sweep(cfg, dir, sweep_args.threads));
    }
    if (verify->parsed()) {
      RunConfig cfg = load_run_config(verify_args.config_path);
      if (verify_args.seed_override >= 0)
        cfg.seed = static_cast<uint64_t>(verify_args.seed_override);
      const auto dir =
          verify_args.out_dir.empty() ? cfg.output_dir : verify_args.out_dir;
      return run("verify", cmd_verify(cfg, dir));
    }
  } catch (const ConfigParseError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 10;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
