#include "loopsynth/solver.hpp"

#include <unistd.h>

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <mutex>

#include "loopsynth/errors.hpp"
#include "loopsynth/eval.hpp"
#include "loopsynth/subprocess.hpp"

namespace loopsynth {

namespace {

class ProcessSlots {
 public:
  void set_cap(std::size_t cap) {
    std::lock_guard lock(mu_);
    cap_ = std::max<std::size_t>(cap, 1);
    cv_.notify_all();
  }
  void acquire() {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return running_ < cap_; });
    ++running_;
  }
  void release() {
    std::lock_guard lock(mu_);
    --running_;
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::size_t cap_ = 4;
  std::size_t running_ = 0;
};

ProcessSlots& slots() {
  static ProcessSlots s;
  return s;
}

class TempFile {
 public:
  explicit TempFile(const std::string& contents) {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "loopsynth-XXXXXX.sl").string();
    int fd = mkstemps(pattern.data(), 3);
    if (fd < 0) throw Error("cannot create temporary problem file");
    close(fd);
    path_ = pattern;
    std::ofstream(path_) << contents;
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace

void SolveBudget::validate() const {
  if (!(timeout_seconds > 0) || max_size == 0 || max_candidates == 0) {
    throw Error("solve budget limits must be positive");
  }
}

void SolverChoice::validate() const {
  if (kind == Kind::Builtin) return;
  std::error_code ec;
  if (path.empty() || !std::filesystem::exists(path, ec)) {
    throw Error("external solver not found: " + path);
  }
  if (access(path.c_str(), X_OK) != 0) {
    throw Error("external solver is not executable: " + path);
  }
}

std::string SolverChoice::describe() const {
  return kind == Kind::Builtin ? "builtin" : "external:" + path;
}

std::string_view failure_name(FailureKind kind) {
  switch (kind) {
    case FailureKind::Timeout:
      return "timeout";
    case FailureKind::Infeasible:
      return "infeasible";
    case FailureKind::ExternalSolverError:
      return "external-solver-error";
    case FailureKind::Cancelled:
      return "cancelled";
  }
  return "?";
}

void set_external_process_cap(std::size_t cap) { slots().set_cap(cap); }

bool satisfies(const Term& t, const FunctionSignature& target,
               const std::vector<ConstraintExample>& examples) {
  if (t.hole_count() != 0 || t.sort() != target.result) return false;
  for (const ConstraintExample& ex : examples) {
    try {
      if (evaluate(t, bind_params(target.params, ex.inputs)) != ex.output) return false;
    } catch (const EvalError&) {
      return false;
    }
  }
  return true;
}

SolveResult external_solve(const SolverChoice& choice, const SygusProblem& problem,
                           const SolveBudget& budget) {
  choice.validate();
  const auto started = std::chrono::steady_clock::now();
  TempFile file(print_problem(problem));
  std::vector<std::string> argv{choice.path};
  argv.insert(argv.end(), choice.extra_args.begin(), choice.extra_args.end());
  argv.push_back(file.path());

  slots().acquire();
  ProcessResult pr;
  try {
    pr = run_process(argv, budget.timeout_seconds);
  } catch (...) {
    slots().release();
    throw;
  }
  slots().release();

  SolveStats stats;
  stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                started)
                      .count();
  if (pr.timed_out) {
    return {SolveFailure{FailureKind::Timeout, "external solver timed out"}, stats};
  }
  std::optional<Term> body;
  try {
    body = parse_solver_output(pr.out, problem.target);
  } catch (const ParseError& e) {
    return {SolveFailure{FailureKind::ExternalSolverError,
                         "exit " + std::to_string(pr.exit_code) + ": " + e.what()},
            stats};
  }
  if (!body) {
    return {SolveFailure{FailureKind::Infeasible, "external solver reported failure"},
            stats};
  }
  if (pr.exit_code != 0) {
    return {SolveFailure{FailureKind::ExternalSolverError,
                         "external solver exited with " + std::to_string(pr.exit_code)},
            stats};
  }
  return {*body, stats};
}

SolveResult solve_pbe(const SygusProblem& problem,
                      const std::vector<ConstraintExample>& examples,
                      const SolveBudget& budget, const SolverChoice& choice,
                      std::stop_token stop) {
  if (problem.grammar.start_sort() != problem.target.result) {
    throw Error("grammar start sort does not match the target return sort");
  }
  SolveResult result = [&]() -> SolveResult {
    if (choice.kind == SolverChoice::Kind::Builtin) {
      return builtin_enumerate(problem.grammar, problem.target, examples, budget,
                               std::move(stop));
    }
    SygusProblem subset = problem;
    subset.examples = examples;
    return external_solve(choice, subset, budget);
  }();
  if (result.ok() && !satisfies(result.term(), problem.target, examples)) {
    return {SolveFailure{FailureKind::ExternalSolverError,
                         "returned term fails the examples: " +
                             result.term().to_string()},
            result.stats()};
  }
  return result;
}

}  // namespace loopsynth
