#include "lct/engine/logfmt.hpp"

#include <cstdio>
#include <sstream>

namespace lct::engine {

std::string render_log(const litmus::LitmusTest& test, const SimulationResult& result) {
  std::ostringstream out;
  out << "Test " << test.name << " Allowed\n";
  out << "States " << result.outcomes.size() << "\n";
  for (const Outcome& o : result.outcomes.outcomes) out << render_outcome(test, o) << "\n";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", result.stats.elapsed_seconds);
  out << "Time " << test.name << " " << buf << "\n";
  return out.str();
}

std::string strip_time_lines(const std::string& log) {
  std::istringstream in(log);
  std::string out, line;
  while (std::getline(in, line)) {
    if (line.rfind("Time ", 0) == 0) continue;
    out += line;
    out += "\n";
  }
  return out;
}

}  // namespace lct::engine
