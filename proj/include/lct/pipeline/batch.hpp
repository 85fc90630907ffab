#pragma once

#include <map>
#include <string>
#include <vector>

#include "lct/pipeline/run.hpp"

namespace lct::pipeline {

struct BatchItem {
  std::string test;
  std::string profile;
  std::string classification;  // "Positive" | ... | "Failure"
  std::string failure_message;
  std::string diff_json;
};

struct BatchSummary {
  // profile -> classification -> count
  std::map<std::string, std::map<std::string, int>> per_profile;
  std::vector<BatchItem> items;  // test-major, profile-minor order

  int total() const;
  int count(const std::string& classification) const;
  std::string render() const;  // aligned per-profile count table
};

// Run the tests × profiles cross product with at most `parallelism` runs in
// flight. Item order and all outputs are deterministic regardless of
// scheduling; a failure in one run never aborts the batch. Throws BadConfig
// when parallelism < 1.
BatchSummary run_batch(const std::vector<litmus::LitmusTest>& tests,
                       const std::vector<CompilerProfile>& profiles, int parallelism,
                       const PipelineOptions& opts);

}  // namespace lct::pipeline
