#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lct/litmus/test.hpp"

namespace lct::transforms {

// Which registers to persist to which fresh globals at thread exit.
struct PersistencePlan {
  // thread id -> (register, fresh global) pairs, in emission order.
  std::map<int, std::vector<std::pair<std::string, std::string>>> per_thread;
  std::string prefix = "q";

  bool empty() const { return per_thread.empty(); }

  // Every register of every thread, named <prefix><thread>_<register>.
  static PersistencePlan auto_for(const litmus::LitmusTest& test,
                                  const std::string& prefix = "q");
};

// Append a non-atomic store of each persisted register to its own fresh
// zero-initialized global at the end of its thread, and add the globals to
// the observables. Original statements are untouched; an empty plan is the
// identity. Source dialect only. Throws NameCollision when a global already
// names a location.
litmus::LitmusTest persist_locals(const litmus::LitmusTest& test, const PersistencePlan& plan);

}  // namespace lct::transforms
