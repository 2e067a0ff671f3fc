// loopsynth: recursive PBE synthesis on top of a black-box SyGuS solver.
//
//   loopsynth solve [options] <file.sl>
//   loopsynth bench [options] <dir>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "loopsynth/errors.hpp"
#include "loopsynth/pipeline.hpp"
#include "loopsynth/report.hpp"

namespace {

constexpr int kExitSolved = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

loopsynth::SolverChoice parse_solver(const std::string& spec,
                                     const std::vector<std::string>& extra) {
  if (spec == "builtin") return loopsynth::SolverChoice::builtin();
  const std::string prefix = "external:";
  if (spec.rfind(prefix, 0) == 0 && spec.size() > prefix.size()) {
    return loopsynth::SolverChoice::external(spec.substr(prefix.size()), extra);
  }
  throw loopsynth::Error("invalid --solver '" + spec +
                         "' (expected builtin or external:<path>)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Synthesize recursive functions from SyGuS programming-by-example problems"};
  app.require_subcommand(1);

  std::string solver = "builtin";
  std::vector<std::string> solver_args;
  double timeout = 60;
  double subset_timeout = 10;
  std::uint64_t fuel = loopsynth::kDefaultFuel;
  std::string order = "given";
  bool no_fallback = false;
  std::string emit = "smtlib";
  std::string prefer = "recursive";
  std::size_t jobs = 1;
  std::size_t max_size = 256;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--solver", solver, "builtin | external:<path>");
    cmd->add_option("--solver-arg", solver_args, "extra argument for an external solver");
    cmd->add_option("--timeout", timeout, "global wall timeout in seconds")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--subset-timeout", subset_timeout,
                    "timeout per base-solver call in seconds")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--fuel", fuel, "evaluation step budget")->check(CLI::PositiveNumber);
    cmd->add_option("--order", order, "given | reversed | random:<seed>");
    cmd->add_flag("--no-fallback", no_fallback, "never fall back to a direct solve");
    cmd->add_option("--emit", emit, "output format")
        ->check(CLI::IsMember({"smtlib", "json"}));
    cmd->add_option("--prefer", prefer, "which solution kind to try first")
        ->check(CLI::IsMember({"direct", "recursive"}));
    cmd->add_option("--jobs", jobs, "concurrent base-solver calls")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-size", max_size, "largest term the builtin solver enumerates")
        ->check(CLI::PositiveNumber);
  };

  std::string input;
  auto* solve = app.add_subcommand("solve", "synthesize a solution for one .sl file");
  add_common(solve);
  solve->add_option("file", input, "SyGuS problem")->required();

  std::string dir;
  auto* bench = app.add_subcommand("bench", "run every .sl file in a directory");
  add_common(bench);
  bench->add_option("dir", dir, "benchmark directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  loopsynth::PipelineConfig config;
  try {
    config.solver = parse_solver(solver, solver_args);
    config.subset_budget.timeout_seconds = std::min(subset_timeout, timeout);
    config.subset_budget.max_size = max_size;
    config.loop_budget = config.subset_budget;
    config.global_timeout_seconds = timeout;
    config.fuel = fuel;
    config.order = loopsynth::SubsetOrder::parse(order);
    config.fallback = !no_fallback;
    config.prefer = prefer == "direct" ? loopsynth::Preference::Direct
                                       : loopsynth::Preference::Recursive;
    config.workers = jobs;
    loopsynth::set_external_process_cap(jobs);
    config.validate();
  } catch (const loopsynth::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (*bench) {
    try {
      auto report = loopsynth::bench_directory(dir, config);
      if (emit == "json") {
        std::cout << report.to_json().dump(2) << "\n";
      } else {
        std::cout << report.to_table();
      }
    } catch (const loopsynth::Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitUsage;
    }
    return kExitSolved;
  }

  loopsynth::SygusProblem problem;
  try {
    std::ifstream in(input, std::ios::binary);
    if (!in) throw loopsynth::Error("cannot read " + input);
    std::ostringstream text;
    text << in.rdbuf();
    problem = loopsynth::parse_problem(text.str());
  } catch (const loopsynth::Error& e) {
    std::cerr << input << ": " << e.what() << "\n";
    return kExitUsage;
  }

  loopsynth::SynthesisResult result = loopsynth::run(problem, config);
  if (emit == "json") {
    std::cout << loopsynth::result_to_json(result, problem).dump(2) << "\n";
  } else if (result.solved()) {
    std::cout << loopsynth::print_result(result, problem);
  } else {
    std::cerr << "failure: " << loopsynth::reason_name(result.failure().reason) << ": "
              << result.failure().detail << "\n";
  }
  return result.solved() ? kExitSolved : kExitFailure;
}
