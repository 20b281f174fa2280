// SPDX-License-Identifier: Apache-2.0
//
// adx: alpha-duplex cellular network simulator
// Copyright (c) 2026 the adx authors

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "adx/adx.hpp"

namespace {

struct CliArgs {
  std::string config_path;
  bool has_seed = false;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out_dir;
};

void add_run_options(CLI::App* sub, CliArgs& args) {
  sub->add_option("--config", args.config_path, "Config file (key=value or a manifest.json)");
  sub->add_option("--seed", args.seed, "Master seed override")
      ->each([&args](const std::string&) { args.has_seed = true; });
  sub->add_option("--workers", args.workers, "Worker threads (0 = all cores)");
  sub->add_option("--out", args.out_dir, "Output directory override");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-duplex cellular network simulator"};
  app.require_subcommand(1);

  CliArgs args;
  CLI::App* cmd_ei = app.add_subcommand("ei", "Pulse-overlap leakage curve");
  CLI::App* cmd_rates =
      app.add_subcommand("rates", "Uplink/downlink rate sweep over alpha");
  CLI::App* cmd_backcompat = app.add_subcommand(
      "backcompat", "Mixed-terminal downlink comparison over alpha");
  CLI::App* cmd_heatmap =
      app.add_subcommand("heatmap", "Aggregate interference rasters");
  for (CLI::App* sub : {cmd_ei, cmd_rates, cmd_backcompat, cmd_heatmap})
    add_run_options(sub, args);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    adx::RunConfig cfg;
    if (!args.config_path.empty()) cfg = adx::load_config(args.config_path);
    if (app.got_subcommand(cmd_ei)) cfg.command = adx::Command::ei;
    if (app.got_subcommand(cmd_rates)) cfg.command = adx::Command::rates;
    if (app.got_subcommand(cmd_backcompat)) cfg.command = adx::Command::backcompat;
    if (app.got_subcommand(cmd_heatmap)) cfg.command = adx::Command::heatmap;
    if (args.has_seed) cfg.seed = args.seed;
    if (args.workers != 0) cfg.workers = args.workers;
    if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
    adx::validate_config(cfg);

    const adx::RunResult result = adx::run(cfg);
    for (const std::string& f : result.files_written)
      std::cout << "wrote " << f << "\n";
    return 0;
  } catch (const adx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const adx::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
