#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace lct::pipeline {

struct ProcResult {
  int exit_code = -1;
  std::string out;
  std::string err;
  bool timed_out = false;
};

// Run argv[0] with captured stdout/stderr and a hard timeout (the process is
// killed on expiry and timed_out set). Throws ToolNotFound when the binary
// cannot be spawned or an ${ENV} reference in argv is unset; never throws for
// a nonzero exit.
ProcResult run_process(const std::vector<std::string>& argv, std::chrono::seconds timeout);

// Expand ${VAR} references; throws ToolNotFound naming the variable when it
// is unset or empty.
std::string expand_env(const std::string& s);

}  // namespace lct::pipeline
