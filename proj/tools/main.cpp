#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vrtos/errors.hpp"
#include "bench.hpp"

int main(int argc, char** argv) {
  CLI::App app{"composite optimization benchmark harness"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed_override = 0;
  auto* run_cmd = app.add_subcommand("run", "run a solver benchmark from a config");
  run_cmd->add_option("--config", config_path, "json config file")->required();
  auto* seed_opt =
      run_cmd->add_option("--seed", seed_override, "override every solver seed");
  auto* out_opt = run_cmd->add_option("--out", out_dir, "override the output dir");

  std::string penalty_kind = "l1";
  std::size_t trials = 1000;
  std::uint64_t prox_seed = 0;
  auto* check_cmd =
      app.add_subcommand("check-prox", "validate a closed-form prox against "
                                       "the search oracle");
  check_cmd->add_option("--penalty", penalty_kind,
                        "l1 | group-lasso | fused2 | consensus");
  check_cmd->add_option("--trials", trials, "random trials");
  check_cmd->add_option("--seed", prox_seed, "rng seed");

  std::size_t gen_n = 100, gen_p = 50;
  double gen_density = 0.1;
  std::string gen_task = "logistic", gen_out;
  std::uint64_t gen_seed = 0;
  auto* gen_cmd = app.add_subcommand("gen-data", "write a synthetic dataset");
  gen_cmd->add_option("--n", gen_n, "samples");
  gen_cmd->add_option("--p", gen_p, "dimensions");
  gen_cmd->add_option("--density", gen_density, "nonzero fraction per row");
  gen_cmd->add_option("--task", gen_task, "logistic | squared");
  gen_cmd->add_option("--seed", gen_seed, "rng seed");
  gen_cmd->add_option("--out", gen_out, "output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      vrtos::bench::BenchConfig config =
          vrtos::bench::load_bench_config(config_path);
      if (seed_opt->count() > 0)
        for (auto& solver : config.solvers) solver.config.seed = seed_override;
      if (out_opt->count() > 0) config.output_dir = out_dir;
      return vrtos::bench::run_benchmark(config);
    }
    if (check_cmd->parsed())
      return vrtos::bench::check_prox(penalty_kind, trials, prox_seed);
    if (gen_cmd->parsed())
      return vrtos::bench::generate_data_file(gen_n, gen_p, gen_density,
                                              gen_task, gen_seed, gen_out);
  } catch (const vrtos::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const vrtos::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const vrtos::DivergenceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const vrtos::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
