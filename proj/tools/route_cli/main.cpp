#include <iostream>

#include "CLI11.hpp"

#include "runner.hpp"

int main(int argc, char** argv) {
  using namespace contnet::cli;
  RunOptions opt;
  CLI::App app{"Continuum routing solvers on a rectangular grid", "route-cli"};
  app.add_option("mode", opt.mode, "hjb | geometry | global | wardrop | affine-direct | dafermos | dense-sim | validate")
      ->required()
      ->check(CLI::IsMember(modes()));
  app.add_option("--scenario", opt.scenario, "scenario JSON")->required();
  app.add_option("--out", opt.out, "output directory (overrides \"output\")");
  app.add_option("--tol", opt.tol, "solver tolerance")->check(CLI::PositiveNumber);
  app.add_option("--max-iters", opt.max_iters, "iteration cap")->check(CLI::PositiveNumber);
  app.add_option("--seed", opt.seed, "seed recorded with the run");
  app.add_flag("--timings", opt.timings, "add wall-clock timings to report.json");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }
  return run(opt, std::cerr);
}
