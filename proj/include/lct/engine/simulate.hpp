#pragma once

#include <chrono>

#include "lct/engine/enumerate.hpp"
#include "lct/engine/outcome.hpp"
#include "lct/models/model.hpp"

namespace lct::engine {

struct SimOptions {
  int unroll_factor = 2;
  uint64_t candidate_cap = 1'000'000;
  std::chrono::milliseconds timeout{120'000};
  bool keep_witnesses = true;
};

struct SimStats {
  uint64_t candidates = 0;  // enumerated
  uint64_t allowed = 0;     // accepted by the model
  double elapsed_seconds = 0;
};

struct SimulationResult {
  OutcomeSet outcomes;
  SimStats stats;
};

// Outcomes of the model-allowed executions. Deterministic; throws
// DialectMismatch / CandidateExplosion / Timeout.
SimulationResult simulate(const litmus::LitmusTest& test, const models::ModelSpec& model,
                          const SimOptions& opts = {});

// Conflicting access pairs (same location, at least one write, at least one
// non-atomic) left unordered by the model's happens-before in some allowed
// execution. Source dialect only; empty result means race-free.
std::vector<std::pair<Event, Event>> detect_races(const litmus::LitmusTest& test,
                                                  const models::ModelSpec& model,
                                                  const SimOptions& opts = {});

}  // namespace lct::engine
