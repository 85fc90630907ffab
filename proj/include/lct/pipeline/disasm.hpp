#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lct/litmus/asm.hpp"

namespace lct::pipeline {

// Relocation records harvested from `objdump -dr` text, plus the offset →
// symbol view used to rewrite numeric addresses. Injective per function.
struct SymbolMap {
  struct Reloc {
    std::string function;
    uint64_t offset = 0;
    std::string type;  // "R_AARCH64_..."
    std::string symbol;
  };
  std::vector<Reloc> relocs;
  std::map<std::pair<std::string, uint64_t>, std::string> by_offset;
};

struct ParsedDisasm {
  // Function name -> instruction list, in section order. ret/nop dropped,
  // branch targets turned into labels, relocations folded into operands.
  std::vector<std::pair<std::string, std::vector<litmus::Instruction>>> functions;
  SymbolMap symbols;
};

// Parse AArch64 `objdump -dr` output. Throws DisassembleFailed on text that
// has no disassembly structure, UnknownMnemonic on unsupported instructions,
// UnmappedAddress when an address-forming instruction has no relocation to
// name its target, UnsupportedConstruct on calls/unsupported relocations.
ParsedDisasm parse_objdump(const std::string& text);

}  // namespace lct::pipeline
