#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>

#include "lct/litmus/value.hpp"

namespace lct::engine {

// Symbolic value over per-path read slots. Builders fold aggressively:
// constant arithmetic, x==x, x^x, x+0. Structural folding is what grounds
// compiler-shaped false dependencies back to constants.
struct SymExpr;
using SymPtr = std::shared_ptr<const SymExpr>;

struct SymExpr {
  enum class Op { Const, Read, Add, Sub, Eq, Xor, Conv, Lo12 };
  Op op = Op::Const;
  litmus::Value k;                       // Const
  int read_slot = -1;                    // Read
  litmus::Width width = litmus::Width::B32;
  bool is_signed = true;                 // result width/signedness
  std::string sym;                       // Lo12: required page symbol
  SymPtr a, b;
};

SymPtr sym_const(litmus::Value v);
SymPtr sym_read(int slot, litmus::Width w, bool is_signed);
SymPtr sym_add(SymPtr a, SymPtr b);
SymPtr sym_sub(SymPtr a, SymPtr b);
SymPtr sym_eq(SymPtr a, SymPtr b);   // 1/0 at B32
SymPtr sym_xor(SymPtr a, SymPtr b);
SymPtr sym_conv(SymPtr a, litmus::Width w, bool is_signed);
// AArch64 :lo12: page-offset addition; grounds to Addr(sym) only when the
// operand grounds to the matching page address.
SymPtr sym_lo12(SymPtr a, std::string sym);

bool sym_equal(const SymPtr& a, const SymPtr& b);
std::optional<litmus::Value> sym_const_value(const SymPtr& e);

// Ground evaluation; read values come from the callback (nullopt = unknown).
// Returns nullopt if any needed read is unknown or a Lo12 mismatches.
std::optional<litmus::Value> sym_eval(
    const SymPtr& e, const std::function<std::optional<litmus::Value>(int)>& read_value);

void sym_reads(const SymPtr& e, std::set<int>& out);
std::string sym_str(const SymPtr& e);

}  // namespace lct::engine
