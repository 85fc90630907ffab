#pragma once

#include <string>

#include "lct/engine/simulate.hpp"

namespace lct::engine {

// herd-style log:
//   Test <name> Allowed
//   States <n>
//   <outcome line per state, sorted>
//   Time <name> <seconds>
std::string render_log(const litmus::LitmusTest& test, const SimulationResult& result);

// Drop `Time ` lines for byte-comparison across runs.
std::string strip_time_lines(const std::string& log);

}  // namespace lct::engine
