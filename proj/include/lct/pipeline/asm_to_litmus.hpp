#pragma once

#include <string>
#include <vector>

#include "lct/litmus/test.hpp"
#include "lct/pipeline/disasm.hpp"
#include "lct/transforms/peephole.hpp"

namespace lct::pipeline {

struct AsmReconstruction {
  litmus::LitmusTest test;
  transforms::OptStats opt_stats;
  std::vector<std::string> warnings;  // deleted observables, skipped renames
};

// Reconstruct an assembly litmus test from parsed disassembly: match
// functions to source threads by their P<k> names (any mismatch is an error,
// never a guess), run the peephole, rename each observable register to its
// source name by matching the defining load/RMW's location and occurrence,
// and synthesize init/final sections from the source test. An observable
// whose defining access was compiled away stays unwritten and reads zero,
// with a warning. Throws UnsupportedConstruct on a thread/function mismatch.
AsmReconstruction asm_to_litmus(const ParsedDisasm& disasm, const litmus::LitmusTest& src,
                                const transforms::PeepholeOptions& opt_rules = {});

}  // namespace lct::pipeline
