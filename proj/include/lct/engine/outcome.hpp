#pragma once

#include <map>
#include <set>

#include "lct/engine/execution.hpp"
#include "lct/litmus/test.hpp"

namespace lct::engine {

// Final observable state of one execution, restricted to the test's
// observables.
struct Outcome {
  std::map<litmus::ObservableKey, litmus::Value> bind;

  friend bool operator<(const Outcome& a, const Outcome& b) { return a.bind < b.bind; }
  friend bool operator==(const Outcome& a, const Outcome& b) { return a.bind == b.bind; }
};

struct OutcomeSet {
  std::set<Outcome> outcomes;
  // One witness execution per outcome (kept when requested).
  std::map<Outcome, CandidateExecution> witnesses;

  bool contains(const Outcome& o) const { return outcomes.count(o) > 0; }
  size_t size() const { return outcomes.size(); }
  bool operator==(const OutcomeSet& o) const { return outcomes == o.outcomes; }
};

// Project one execution to its outcome over the test's observables.
Outcome outcome_of(const litmus::LitmusTest& test, const CandidateExecution& exec);

// Project a set of model-allowed executions; deduplicates, keeps one witness
// per outcome.
OutcomeSet outcomes_of(const litmus::LitmusTest& test,
                       const std::vector<CandidateExecution>& execs);

// "1:r0=2; y=2;" (source dialect) or "P1_r0=2; y=2;" (asm dialect).
std::string render_outcome(const litmus::LitmusTest& test, const Outcome& o);

}  // namespace lct::engine
