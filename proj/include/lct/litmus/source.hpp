#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lct/litmus/expr.hpp"
#include "lct/litmus/order.hpp"

namespace lct::litmus {

// Source-dialect statement. NA order is legal only on loads/stores.
struct Statement;
using Block = std::vector<Statement>;

struct Statement {
  enum class Kind {
    Store,     // store(loc, value, order)        loc/value/order
    Load,      // load(reg, loc, order)           reg/loc/order
    FetchAdd,  // reg = fetch_add(loc, value, o)  reg/loc/value/order
    Exchange,  // reg = exchange(loc, value, o)   reg/loc/value/order
    Fence,     // fence(order)                    order
    Assign,    // reg = value                     reg/value
    If,        // if (cond) then_body else else_body
  };
  Kind kind;
  std::string reg;
  std::string loc;
  ExprPtr value;
  ExprPtr cond;
  MemOrder order = MemOrder::NA;
  std::shared_ptr<Block> then_body;
  std::shared_ptr<Block> else_body;  // may be null
};

bool statement_equal(const Statement& a, const Statement& b);
bool block_equal(const Block& a, const Block& b);

}  // namespace lct::litmus
