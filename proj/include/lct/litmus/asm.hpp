#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lct/litmus/order.hpp"
#include "lct/litmus/value.hpp"

namespace lct::litmus {

// Address operand of a memory instruction: register-indirect, register with a
// :lo12: page-offset tag, or direct symbolic (the peephole's output form).
struct AddrOperand {
  enum class Form { Reg, RegLo12, Sym };
  Form form = Form::Reg;
  std::string base;  // register (Reg, RegLo12)
  std::string sym;   // symbol (RegLo12, Sym)

  friend bool operator==(const AddrOperand& a, const AddrOperand& b) {
    return a.form == b.form && a.base == b.base && a.sym == b.sym;
  }
};

enum class Cond { EQ, NE };

// One assembly-dialect instruction. The AArch64 subset and the abstract ISA
// share this representation; the abstract ISA is a mnemonic respelling.
struct Instruction {
  enum class Kind {
    Load,    // dst, addr; order Rlx|Acq|AcqPC
    Store,   // src, addr; order Rlx|Rel
    LdAdd,   // src (addend), dst (old value; empty for STADD), addr
    Swp,     // src (new value), dst (old value), addr
    Cas,     // dst (expected in / old out), src (new value), addr
    Dmb,     // fence
    Adrp,    // dst, sym (page address; modelled as the symbol's address)
    Adr,     // dst, sym
    MovImm,  // dst, imm
    MovReg,  // dst, src
    Add,     // dst, src, src2/imm, optional lo12 sym tag
    Eor,     // dst, src, src2/imm
    Subs,    // dst, src, src2/imm; sets flags
    Cbz,     // src, label
    Cbnz,    // src, label
    BCond,   // cond, label
    B,       // label
    Label,   // label definition
    Stuck,   // residual-iteration marker planted by unroll; kills the path
  };
  Kind kind;
  std::string dst;
  std::string src;
  std::string src2;
  std::optional<int64_t> imm;
  std::string sym;    // Adrp/Adr target, or Add's :lo12: tag
  std::string label;
  AddrOperand addr;
  MemOrder order = MemOrder::Rlx;     // memory accesses: access ordering
  MemOrder order2 = MemOrder::Rlx;    // RMWs: write-half ordering
  FenceKind fence = FenceKind::None;  // Dmb
  Cond cond = Cond::EQ;
  std::optional<Width> width_suffix;  // from B/H mnemonic suffixes

  bool is_memory_access() const {
    return kind == Kind::Load || kind == Kind::Store || kind == Kind::LdAdd ||
           kind == Kind::Swp || kind == Kind::Cas;
  }
};

bool instruction_equal(const Instruction& a, const Instruction& b);

// W-prefixed and r-named registers are 32-bit; X-prefixed are 64-bit.
Width register_width(const std::string& reg);
bool is_zero_register(const std::string& reg);

// Access width: explicit byte/half suffix on the mnemonic wins, otherwise the
// data register's class decides.
Width access_width(const Instruction& ins);

}  // namespace lct::litmus
