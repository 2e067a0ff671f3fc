#pragma once

#include <string>
#include <vector>

namespace loopsynth {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Run argv[0] with arguments, capturing stdout/stderr. The process is
/// killed with SIGKILL once `timeout_seconds` elapses. Throws Error if the
/// process cannot be started.
ProcessResult run_process(const std::vector<std::string>& argv,
                          double timeout_seconds);

}  // namespace loopsynth
