#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "halanay/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Stability certification and simulation for time-varying delay systems"};
  app.require_subcommand(1, 1);

  halanay::CommandOptions opts;
  std::string out_dir;
  std::uint64_t seed = 0;
  double tolerance = 0.0;

  for (const char* name : {"measure", "certify", "simulate", "sync", "periodic"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", opts.config, "JSON configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides outputs.dir)");
    sub->add_option("--seed", seed, "seed for random histories (overrides the config seed)");
    sub->add_option("--tolerance", tolerance, "relative tolerance of the inequality checks")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : halanay::kExitConfig;
  }

  const auto* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--out") > 0) opts.out_dir = out_dir;
  if (sub->count("--seed") > 0) opts.seed = seed;
  if (sub->count("--tolerance") > 0) opts.tolerance = tolerance;
  return halanay::run_command(opts, std::cout, std::cerr);
}
