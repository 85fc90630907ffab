#pragma once

#include <string>
#include <vector>

#include "lct/litmus/test.hpp"

namespace lct::transforms {

// One point of a generation grid. Shapes are the classic two-thread
// communication patterns; schemes annotate every access uniformly.
struct PatternSpec {
  std::string shape;        // MP | LB | SB | S | R | 2+2W | W+RR
  std::string scheme = "rlx";  // rlx | ra | sc | na | rlx+scf
  litmus::Width width = litmus::Width::B32;
  bool is_signed = true;
  // LB only: per-thread body variant 1..7 (0 = plain shape). Variants keep
  // the observable behaviour of the plain body but dress the store in
  // compiler-removable padding (false data deps, forced branches, dead code).
  int variant_p0 = 0;
  int variant_p1 = 0;
};

// Deterministic name, also used as the test name: e.g. "MP_ra_32s",
// "LB_3_5_16u" for variant grids. '+' in shapes is spelled out ("2p2W").
std::string pattern_test_name(const PatternSpec& spec);

// Expand a named preset grid. "lb294": LB, all 49 variant pairs x widths
// {8,16,32} x signedness, scheme rlx. "base210": all 7 shapes x 5 schemes x
// widths x signedness. Throws BadConfig on an unknown preset.
std::vector<PatternSpec> preset_grid(const std::string& name);

// Build one litmus test per spec. Same grid in, byte-identical tests out.
// Throws UnsupportedShape on an unknown shape, scheme, or variant.
std::vector<litmus::LitmusTest> generate_pattern_tests(const std::vector<PatternSpec>& grid);

}  // namespace lct::transforms
