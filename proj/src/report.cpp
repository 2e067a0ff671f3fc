#include "loopsynth/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "loopsynth/errors.hpp"

namespace loopsynth {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error("cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json opt(const std::optional<std::size_t>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

RunRow bench_problem(const std::string& name, const SygusProblem& problem,
                     const PipelineConfig& config) {
  RunRow row;
  row.name = name;
  row.timeout_seconds = config.global_timeout_seconds;

  SynthesisResult r = run(problem, config);
  row.pipeline_seconds = r.stats.wall_seconds;
  if (r.recursive()) {
    row.pipeline_outcome = "recursive";
    row.pipeline_ast = r.stats.ast_size;
  } else if (r.solved()) {
    row.pipeline_outcome = "direct";
    row.pipeline_ast = r.stats.ast_size;
  } else {
    row.pipeline_outcome = std::string(reason_name(r.failure().reason));
  }

  SolveResult b = baseline_direct_solve(problem, config);
  row.baseline_seconds = b.stats().seconds;
  if (b.ok()) {
    row.baseline_outcome = "solved";
    row.baseline_ast = direct_ast_size(b.term());
  } else {
    row.baseline_outcome = std::string(failure_name(b.failure().kind));
  }
  return row;
}

RunReport bench_directory(const std::filesystem::path& dir, const PipelineConfig& config) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".sl") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  RunReport report;
  for (const auto& f : files) {
    SygusProblem p = parse_problem(read_file(f));
    report.rows.push_back(bench_problem(f.filename().string(), p, config));
  }
  return report;
}

std::string RunReport::to_table() const {
  std::ostringstream os;
  os << pad("Benchmark", 14) << "| " << pad("Pipeline time", 15) << pad("|AST|", 8)
     << "| " << pad("Direct time", 15) << "|AST|\n";
  os << std::string(14, '-') << "+-" << std::string(23, '-') << "+-"
     << std::string(20, '-') << "\n";
  for (const RunRow& r : rows) {
    auto cell = [](const std::string& outcome, double secs,
                   const std::optional<std::size_t>& ast, double timeout,
                   bool ok) -> std::pair<std::string, std::string> {
      if (ok) return {fixed(secs, 3) + "s", std::to_string(*ast)};
      if (outcome == "timeout") return {"TO (" + fixed(timeout, 0) + "s)", "-"};
      return {outcome, "-"};
    };
    auto [pt, pa] = cell(r.pipeline_outcome, r.pipeline_seconds, r.pipeline_ast,
                         r.timeout_seconds, r.pipeline_ast.has_value());
    auto [bt, ba] = cell(r.baseline_outcome, r.baseline_seconds, r.baseline_ast,
                         r.timeout_seconds, r.baseline_ast.has_value());
    if (r.pipeline_ast && r.pipeline_outcome == "direct") pa += " (direct)";
    os << pad(r.name, 14) << "| " << pad(pt, 15) << pad(pa, 8) << "| " << pad(bt, 15)
       << ba << "\n";
  }
  return os.str();
}

nlohmann::json RunReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const RunRow& r : rows) {
    rows_json.push_back({
        {"name", r.name},
        {"timeout_seconds", r.timeout_seconds},
        {"pipeline",
         {{"outcome", r.pipeline_outcome},
          {"seconds", r.pipeline_seconds},
          {"ast_size", opt(r.pipeline_ast)}}},
        {"baseline",
         {{"outcome", r.baseline_outcome},
          {"seconds", r.baseline_seconds},
          {"ast_size", opt(r.baseline_ast)}}},
    });
  }
  return {{"rows", rows_json}};
}

nlohmann::json result_to_json(const SynthesisResult& result, const SygusProblem& problem) {
  const SynthesisStats& s = result.stats;
  nlohmann::json j;
  j["stats"] = {
      {"subsets_total", s.subsets_total},
      {"subsets_solved", s.subsets_solved},
      {"subsets_failed", s.subsets_failed},
      {"categories", s.categories},
      {"phase4_attempts", s.phase4_attempts},
      {"phase5_attempts", s.phase5_attempts},
      {"wall_seconds", s.wall_seconds},
      {"ast_size", s.ast_size},
  };
  if (result.recursive()) {
    const RecursiveSolution& sol = result.recursive_solution();
    j["status"] = "recursive";
    j["solution"] = print_solution(sol);
    j["loop_count"] = sol.h.to_string();
    j["category"] = {{"skeleton", sol.category.skeleton},
                     {"context", sol.category.context},
                     {"base", sol.category.base}};
  } else if (result.solved()) {
    j["status"] = "direct";
    j["solution"] = print_solution(problem.target, result.direct_solution());
  } else {
    j["status"] = "failure";
    j["reason"] = std::string(reason_name(result.failure().reason));
    j["detail"] = result.failure().detail;
  }
  return j;
}

}  // namespace loopsynth
