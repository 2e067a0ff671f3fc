#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "loopsynth/pipeline.hpp"

namespace loopsynth {

struct RunRow {
  std::string name;
  // pipeline
  std::string pipeline_outcome;  // "recursive", "direct" or a failure reason
  double pipeline_seconds = 0;
  std::optional<std::size_t> pipeline_ast;
  // direct solve of the whole problem
  std::string baseline_outcome;  // "solved" or a failure kind
  double baseline_seconds = 0;
  std::optional<std::size_t> baseline_ast;
  double timeout_seconds = 0;
};

struct RunReport {
  std::vector<RunRow> rows;

  std::string to_table() const;
  nlohmann::json to_json() const;
};

/// Run the pipeline and the direct baseline on one problem.
RunRow bench_problem(const std::string& name, const SygusProblem& problem,
                     const PipelineConfig& config);

/// Every `.sl` file in `dir`, ordered by filename.
RunReport bench_directory(const std::filesystem::path& dir, const PipelineConfig& config);

nlohmann::json result_to_json(const SynthesisResult& result, const SygusProblem& problem);

}  // namespace loopsynth
