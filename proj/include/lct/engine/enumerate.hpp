#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>

#include "lct/engine/execution.hpp"
#include "lct/litmus/test.hpp"

namespace lct::engine {

struct EnumOptions {
  uint64_t candidate_cap = 1'000'000;
  // Absolute deadline; unset means unbounded.
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

// Stream every candidate execution of an unrolled test: per-thread path
// choice, rf assignment over same-location writes, and per-location co
// orders with init first. RMW atomicity is enforced at generation. The
// callback may return false to stop early.
// Throws CandidateExplosion past the cap and Timeout past the deadline.
void enumerate_candidates(const litmus::LitmusTest& test, const EnumOptions& opts,
                          const std::function<bool(const CandidateExecution&)>& yield);

std::vector<CandidateExecution> enumerate_all(const litmus::LitmusTest& test,
                                              const EnumOptions& opts = {});

}  // namespace lct::engine
