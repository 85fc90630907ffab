#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "lct/litmus/value.hpp"

namespace lct::litmus {

// Source-dialect expression: constants, register reads, +, ==.
struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Op { Const, Reg, Add, Eq };
  Op op;
  int64_t k = 0;        // Const
  std::string reg;      // Reg
  ExprPtr lhs, rhs;     // Add, Eq

  static ExprPtr constant(int64_t v) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Const;
    e->k = v;
    return e;
  }
  static ExprPtr regref(std::string name) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Reg;
    e->reg = std::move(name);
    return e;
  }
  static ExprPtr add(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Add;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
  static ExprPtr eq(ExprPtr a, ExprPtr b) {
    auto e = std::make_shared<Expr>();
    e->op = Op::Eq;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
  }
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
std::string render_expr(const ExprPtr& e);

}  // namespace lct::litmus
