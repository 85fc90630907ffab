#pragma once

#include <string>

#include "lct/litmus/test.hpp"

namespace lct::litmus {

// Parse a .litmus document. The header keyword selects the dialect:
// `C <name>` (source), `AArch64 <name>` or `ABS <name>` (assembly).
LitmusTest parse_litmus(const std::string& text);

LitmusTest parse_source_litmus(const std::string& text);
LitmusTest parse_asm_litmus(const std::string& text, ISA isa);

// Serialize; parse(render(t)) is structurally equal to t.
std::string render_litmus(const LitmusTest& test);

// All invariant violations; empty means valid. Never throws.
std::vector<Diagnostic> validate_test(const LitmusTest& test);

}  // namespace lct::litmus
