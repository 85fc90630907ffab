#include <algorithm>

#include "lct/litmus/asm.hpp"
#include "lct/litmus/expr.hpp"
#include "lct/litmus/order.hpp"
#include "lct/litmus/predicate.hpp"
#include "lct/litmus/test.hpp"

namespace lct::litmus {

std::string order_name(MemOrder o) {
  switch (o) {
    case MemOrder::NA: return "na";
    case MemOrder::Rlx: return "relaxed";
    case MemOrder::AcqPC: return "acquire-pc";
    case MemOrder::Acq: return "acquire";
    case MemOrder::Rel: return "release";
    case MemOrder::AcqRel: return "acq_rel";
    case MemOrder::SC: return "seq_cst";
  }
  return "?";
}

std::string order_c11_name(MemOrder o) {
  switch (o) {
    case MemOrder::Rlx: return "memory_order_relaxed";
    case MemOrder::Acq: return "memory_order_acquire";
    case MemOrder::Rel: return "memory_order_release";
    case MemOrder::AcqRel: return "memory_order_acq_rel";
    case MemOrder::SC: return "memory_order_seq_cst";
    default: return "memory_order_relaxed";
  }
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  switch (a->op) {
    case Expr::Op::Const: return a->k == b->k;
    case Expr::Op::Reg: return a->reg == b->reg;
    default: return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
}

std::string render_expr(const ExprPtr& e) {
  switch (e->op) {
    case Expr::Op::Const: return std::to_string(e->k);
    case Expr::Op::Reg: return e->reg;
    case Expr::Op::Add: return render_expr(e->lhs) + " + " + render_expr(e->rhs);
    case Expr::Op::Eq: return "(" + render_expr(e->lhs) + " == " + render_expr(e->rhs) + ")";
  }
  return "?";
}

bool statement_equal(const Statement& a, const Statement& b) {
  if (a.kind != b.kind || a.reg != b.reg || a.loc != b.loc || a.order != b.order) return false;
  if (!expr_equal(a.value, b.value) || !expr_equal(a.cond, b.cond)) return false;
  auto blocks_eq = [](const std::shared_ptr<Block>& x, const std::shared_ptr<Block>& y) {
    if (!x && !y) return true;
    if (!x || !y) return false;
    return block_equal(*x, *y);
  };
  return blocks_eq(a.then_body, b.then_body) && blocks_eq(a.else_body, b.else_body);
}

bool block_equal(const Block& a, const Block& b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), statement_equal);
}

bool instruction_equal(const Instruction& a, const Instruction& b) {
  return a.kind == b.kind && a.dst == b.dst && a.src == b.src && a.src2 == b.src2 &&
         a.imm == b.imm && a.sym == b.sym && a.label == b.label && a.addr == b.addr &&
         a.order == b.order && a.order2 == b.order2 && a.fence == b.fence && a.cond == b.cond &&
         a.width_suffix == b.width_suffix;
}

Width register_width(const std::string& reg) {
  if (!reg.empty() && (reg[0] == 'X' || reg[0] == 'x')) return Width::B64;
  return Width::B32;
}

bool is_zero_register(const std::string& reg) { return reg == "XZR" || reg == "WZR"; }

Width access_width(const Instruction& ins) {
  if (ins.width_suffix) return *ins.width_suffix;
  const std::string& data = ins.kind == Instruction::Kind::Store ? ins.src
                            : ins.kind == Instruction::Kind::Load ? ins.dst
                                                                  : ins.src;
  return register_width(data);
}

std::string ObservableKey::source_name() const {
  if (kind == Kind::Reg) return std::to_string(thread) + ":" + name;
  return name;
}

std::string ObservableKey::asm_name() const {
  if (kind == Kind::Reg) return "P" + std::to_string(thread) + "_" + name;
  return name;
}

PredPtr PredNode::atom(ObservableKey k, int64_t v) {
  auto n = std::make_shared<PredNode>();
  n->op = Op::Atom;
  n->obs = std::move(k);
  n->value = v;
  return n;
}
PredPtr PredNode::conj(PredPtr a, PredPtr b) {
  auto n = std::make_shared<PredNode>();
  n->op = Op::And;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
PredPtr PredNode::disj(PredPtr a, PredPtr b) {
  auto n = std::make_shared<PredNode>();
  n->op = Op::Or;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
PredPtr PredNode::negate(PredPtr a) {
  auto n = std::make_shared<PredNode>();
  n->op = Op::Not;
  n->lhs = std::move(a);
  return n;
}
PredPtr PredNode::truth() {
  static const PredPtr t = std::make_shared<PredNode>();
  return t;
}

bool pred_equal(const PredPtr& a, const PredPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == PredNode::Op::Atom) return a->obs == b->obs && a->value == b->value;
  if (a->op == PredNode::Op::True) return true;
  return pred_equal(a->lhs, b->lhs) && pred_equal(a->rhs, b->rhs);
}

static void collect_obs(const PredPtr& p, std::vector<ObservableKey>& out) {
  if (!p) return;
  if (p->op == PredNode::Op::Atom) out.push_back(p->obs);
  collect_obs(p->lhs, out);
  collect_obs(p->rhs, out);
}

std::vector<ObservableKey> pred_observables(const PredPtr& p) {
  std::vector<ObservableKey> out;
  collect_obs(p, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool eval_pred(const PredPtr& p, const std::map<ObservableKey, Value>& bind) {
  switch (p->op) {
    case PredNode::Op::True: return true;
    case PredNode::Op::Atom: {
      auto it = bind.find(p->obs);
      Value actual = it == bind.end() ? Value::integer(0) : it->second;
      Value expect = Value::integer(p->value, actual.width, actual.is_signed);
      return actual == expect;
    }
    case PredNode::Op::And: return eval_pred(p->lhs, bind) && eval_pred(p->rhs, bind);
    case PredNode::Op::Or: return eval_pred(p->lhs, bind) || eval_pred(p->rhs, bind);
    case PredNode::Op::Not: return !eval_pred(p->lhs, bind);
  }
  return false;
}

std::vector<ObservableKey> LitmusTest::observables() const {
  std::vector<ObservableKey> out = pred_observables(final_pred.body);
  out.insert(out.end(), locations.begin(), locations.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool test_equal(const LitmusTest& a, const LitmusTest& b) {
  if (a.name != b.name || a.dialect != b.dialect || a.isa != b.isa) return false;
  if (a.init.locations.size() != b.init.locations.size()) return false;
  for (const auto& [name, info] : a.init.locations) {
    auto it = b.init.locations.find(name);
    if (it == b.init.locations.end()) return false;
    if (!(it->second.init == info.init) || it->second.width != info.width ||
        it->second.is_signed != info.is_signed)
      return false;
  }
  if (a.init.registers != b.init.registers) return false;
  if (a.init.layout != b.init.layout) return false;
  if (a.threads.size() != b.threads.size()) return false;
  for (size_t i = 0; i < a.threads.size(); ++i) {
    const Thread& x = a.threads[i];
    const Thread& y = b.threads[i];
    if (x.id != y.id) return false;
    if (!block_equal(x.body, y.body)) return false;
    if (x.code.size() != y.code.size() ||
        !std::equal(x.code.begin(), x.code.end(), y.code.begin(), instruction_equal))
      return false;
    if (x.registers.size() != y.registers.size()) return false;
    for (const auto& [name, info] : x.registers) {
      auto it = y.registers.find(name);
      if (it == y.registers.end() || it->second.width != info.width ||
          it->second.is_signed != info.is_signed)
        return false;
    }
  }
  if (a.final_pred.mode != b.final_pred.mode || !pred_equal(a.final_pred.body, b.final_pred.body))
    return false;
  if (a.locations != b.locations) return false;
  return a.metadata == b.metadata;
}

}  // namespace lct::litmus
