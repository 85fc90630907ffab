#include "lct/litmus/parse.hpp"
#include "parse_internal.hpp"

namespace lct::litmus {
namespace {

using detail::Cursor;

MemOrder parse_memory_order(Cursor& c) {
  std::string name = c.ident();
  if (name == "memory_order_relaxed") return MemOrder::Rlx;
  if (name == "memory_order_acquire") return MemOrder::Acq;
  if (name == "memory_order_release") return MemOrder::Rel;
  if (name == "memory_order_acq_rel") return MemOrder::AcqRel;
  if (name == "memory_order_seq_cst") return MemOrder::SC;
  c.fail("memory order constant");
}

// Expressions over constants, registers, + and ==; parenthesized freely.
ExprPtr parse_expr(Cursor& c);

ExprPtr parse_expr_primary(Cursor& c) {
  if (c.try_consume("(")) {
    ExprPtr e = parse_expr(c);
    c.expect(")");
    return e;
  }
  if (c.peek_number()) return Expr::constant(c.number());
  if (c.peek_ident()) return Expr::regref(c.ident());
  c.fail("expression");
}

ExprPtr parse_expr_sum(Cursor& c) {
  ExprPtr e = parse_expr_primary(c);
  while (c.try_consume("+")) e = Expr::add(e, parse_expr_primary(c));
  return e;
}

ExprPtr parse_expr(Cursor& c) {
  ExprPtr e = parse_expr_sum(c);
  while (c.try_consume("==")) e = Expr::eq(e, parse_expr_sum(c));
  return e;
}

// Location argument of an atomic builtin: `x` or `&x`.
std::string parse_loc_arg(Cursor& c) {
  c.try_consume("&");
  return c.ident();
}

Block parse_block(Cursor& c, Thread& t);

// One statement; the leading identifier (or `*`/`if`) selects the form.
Statement parse_statement(Cursor& c, Thread& t) {
  Statement s;
  if (c.try_consume("*")) {  // `*x = e;` non-atomic store
    s.kind = Statement::Kind::Store;
    s.order = MemOrder::NA;
    s.loc = c.ident();
    c.expect("=");
    s.value = parse_expr(c);
    c.expect(";");
    return s;
  }
  if (c.peek_is("if")) {
    c.expect("if");
    s.kind = Statement::Kind::If;
    c.expect("(");
    s.cond = parse_expr(c);
    c.expect(")");
    s.then_body = std::make_shared<Block>(parse_block(c, t));
    if (c.try_consume("else")) s.else_body = std::make_shared<Block>(parse_block(c, t));
    return s;
  }

  std::string head = c.ident();
  if (head == "atomic_store_explicit") {
    s.kind = Statement::Kind::Store;
    c.expect("(");
    s.loc = parse_loc_arg(c);
    c.expect(",");
    s.value = parse_expr(c);
    c.expect(",");
    s.order = parse_memory_order(c);
    c.expect(")");
    c.expect(";");
    return s;
  }
  if (head == "atomic_thread_fence") {
    s.kind = Statement::Kind::Fence;
    c.expect("(");
    s.order = parse_memory_order(c);
    c.expect(")");
    c.expect(";");
    return s;
  }

  // Remaining forms bind a register: optional type, register name, `=`, rhs.
  std::string reg = head;
  if (c.peek_ident()) {  // `int r0 = ...`
    bool is_signed = true;
    Width w = parse_width(head, is_signed);
    reg = c.ident();
    t.registers[reg] = RegisterInfo{w, is_signed};
  }
  s.reg = reg;
  c.expect("=");
  if (c.try_consume("*")) {  // non-atomic load
    s.kind = Statement::Kind::Load;
    s.order = MemOrder::NA;
    s.loc = c.ident();
    c.expect(";");
    return s;
  }
  if (c.peek_is("atomic_load_explicit") || c.peek_is("atomic_fetch_add_explicit") ||
      c.peek_is("atomic_exchange_explicit")) {
    std::string call = c.ident();
    c.expect("(");
    s.loc = parse_loc_arg(c);
    if (call == "atomic_load_explicit") {
      s.kind = Statement::Kind::Load;
    } else {
      s.kind = call == "atomic_fetch_add_explicit" ? Statement::Kind::FetchAdd
                                                   : Statement::Kind::Exchange;
      c.expect(",");
      s.value = parse_expr(c);
    }
    c.expect(",");
    s.order = parse_memory_order(c);
    c.expect(")");
    c.expect(";");
    return s;
  }
  s.kind = Statement::Kind::Assign;
  s.value = parse_expr(c);
  c.expect(";");
  return s;
}

Block parse_block(Cursor& c, Thread& t) {
  Block body;
  c.expect("{");
  while (!c.peek_is("}")) body.push_back(parse_statement(c, t));
  c.expect("}");
  return body;
}

}  // namespace

LitmusTest parse_source_litmus(const std::string& text) {
  detail::Cursor c(text);
  LitmusTest test;
  test.dialect = Dialect::Source;
  c.expect("C");
  test.name = c.ident();
  detail::parse_init_block(c, test);

  while (c.peek_is("P")) {
    std::string label = c.ident();
    int id = detail::parse_thread_label(label);
    if (id < 0) c.fail("thread label P<k>");
    Thread t;
    t.id = id;
    if (c.try_consume("(")) {  // parameter list tolerated and ignored
      while (!c.try_consume(")")) c.advance();
    }
    t.body = parse_block(c, t);
    test.threads.push_back(std::move(t));
  }
  if (test.threads.empty()) c.fail("at least one thread");

  detail::parse_tail_sections(c, test);

  test.metadata = c.metadata;
  detail::normalize_test(test);
  return test;
}

}  // namespace lct::litmus
