#include "lct/engine/paths.hpp"
#include "lct/litmus/error.hpp"

namespace lct::engine {

namespace {

using litmus::Block;
using litmus::Expr;
using litmus::ExprPtr;
using litmus::LitmusTest;
using litmus::LocationInfo;
using litmus::MemOrder;
using litmus::RegisterInfo;
using litmus::Statement;
using litmus::Thread;
using litmus::Value;
using litmus::Width;

struct SrcState {
  std::vector<PathAccess> accesses;
  std::vector<std::pair<SymPtr, bool>> constraints;
  std::map<std::string, SymPtr> env;
  int next_slot = 0;
  int next_stmt = 0;
};

RegisterInfo reg_info(const Thread& t, const std::string& reg) {
  auto it = t.registers.find(reg);
  return it == t.registers.end() ? RegisterInfo{} : it->second;
}

LocationInfo loc_info(const LitmusTest& test, const std::string& loc) {
  auto it = test.init.locations.find(loc);
  return it == test.init.locations.end() ? LocationInfo{} : it->second;
}

SymPtr read_reg(SrcState& st, const Thread& t, const std::string& reg) {
  auto it = st.env.find(reg);
  if (it != st.env.end()) return it->second;
  RegisterInfo ri = reg_info(t, reg);
  return sym_const(Value::integer(0, ri.width, ri.is_signed));
}

SymPtr eval_expr(const ExprPtr& e, SrcState& st, const Thread& t) {
  switch (e->op) {
    case Expr::Op::Const:
      return sym_const(Value::integer(e->k));
    case Expr::Op::Reg:
      return read_reg(st, t, e->reg);
    case Expr::Op::Add:
      return sym_add(eval_expr(e->lhs, st, t), eval_expr(e->rhs, st, t));
    case Expr::Op::Eq:
      return sym_eq(eval_expr(e->lhs, st, t), eval_expr(e->rhs, st, t));
  }
  throw Error(ErrorKind::UnsupportedConstruct, "malformed expression");
}

void assign_reg(SrcState& st, const Thread& t, const std::string& reg, SymPtr v) {
  RegisterInfo ri = reg_info(t, reg);
  st.env[reg] = sym_conv(std::move(v), ri.width, ri.is_signed);
}

struct Walker {
  const LitmusTest& test;
  const Thread& thread;
  std::vector<ThreadPath> out;

  void finish(SrcState st) {
    ThreadPath p;
    p.thread = thread.id;
    p.choice_index = static_cast<int>(out.size());
    p.accesses = std::move(st.accesses);
    p.constraints = std::move(st.constraints);
    for (const auto& [reg, info] : thread.registers) {
      (void)info;
      p.final_regs[reg] = read_reg(st, thread, reg);
    }
    out.push_back(std::move(p));
  }

  void walk(const Block& body, size_t ix, SrcState st) {
    for (; ix < body.size(); ++ix) {
      const Statement& s = body[ix];
      int stmt = st.next_stmt++;
      switch (s.kind) {
        case Statement::Kind::Store: {
          LocationInfo li = loc_info(test, s.loc);
          PathAccess a;
          a.kind = PathAccess::Kind::Write;
          a.loc = s.loc;
          a.value = sym_conv(eval_expr(s.value, st, thread), li.width, li.is_signed);
          a.width = li.width;
          a.is_signed = li.is_signed;
          a.order = s.order;
          a.origin_stmt = stmt;
          st.accesses.push_back(std::move(a));
          break;
        }
        case Statement::Kind::Load: {
          LocationInfo li = loc_info(test, s.loc);
          PathAccess a;
          a.kind = PathAccess::Kind::Read;
          a.loc = s.loc;
          a.read_slot = st.next_slot++;
          a.width = li.width;
          a.is_signed = li.is_signed;
          a.order = s.order;
          a.origin_stmt = stmt;
          assign_reg(st, thread, s.reg, sym_read(a.read_slot, li.width, li.is_signed));
          st.accesses.push_back(std::move(a));
          break;
        }
        case Statement::Kind::FetchAdd:
        case Statement::Kind::Exchange: {
          LocationInfo li = loc_info(test, s.loc);
          int read_ix = static_cast<int>(st.accesses.size());
          SymPtr old = sym_read(st.next_slot, li.width, li.is_signed);

          PathAccess r;
          r.kind = PathAccess::Kind::Read;
          r.loc = s.loc;
          r.read_slot = st.next_slot++;
          r.width = li.width;
          r.is_signed = li.is_signed;
          r.order = litmus::rmw_read_order(s.order);
          r.is_rmw_read = true;
          r.rmw_pair = read_ix + 1;
          r.origin_stmt = stmt;
          st.accesses.push_back(std::move(r));

          SymPtr operand = eval_expr(s.value, st, thread);
          PathAccess w;
          w.kind = PathAccess::Kind::Write;
          w.loc = s.loc;
          w.value = sym_conv(s.kind == Statement::Kind::FetchAdd ? sym_add(old, operand)
                                                                 : operand,
                             li.width, li.is_signed);
          w.width = li.width;
          w.is_signed = li.is_signed;
          w.order = litmus::rmw_write_order(s.order);
          w.is_rmw_write = true;
          w.rmw_pair = read_ix;
          w.origin_stmt = stmt;
          st.accesses.push_back(std::move(w));

          assign_reg(st, thread, s.reg, old);
          break;
        }
        case Statement::Kind::Fence: {
          PathAccess a;
          a.kind = PathAccess::Kind::Fence;
          a.order = s.order;
          a.fence = s.order == MemOrder::SC ? litmus::FenceKind::Full : litmus::FenceKind::None;
          a.origin_stmt = stmt;
          st.accesses.push_back(std::move(a));
          break;
        }
        case Statement::Kind::Assign:
          assign_reg(st, thread, s.reg, eval_expr(s.value, st, thread));
          break;
        case Statement::Kind::If: {
          SymPtr cond = eval_expr(s.cond, st, thread);
          const Block empty;
          const Block& then_b = s.then_body ? *s.then_body : empty;
          const Block& else_b = s.else_body ? *s.else_body : empty;

          if (auto cv = sym_const_value(cond)) {
            // Decided at fold time: one successor, no constraint.
            const Block& taken = cv->canonical() != 0 ? then_b : else_b;
            SrcState next = std::move(st);
            walk_nested(taken, body, ix + 1, std::move(next));
            return;
          }
          SrcState then_st = st;
          then_st.constraints.emplace_back(cond, true);
          walk_nested(then_b, body, ix + 1, std::move(then_st));

          SrcState else_st = std::move(st);
          else_st.constraints.emplace_back(cond, false);
          walk_nested(else_b, body, ix + 1, std::move(else_st));
          return;
        }
      }
    }
    finish(std::move(st));
  }

  // Execute `inner`, then resume `outer` at `resume_ix`.
  void walk_nested(const Block& inner, const Block& outer, size_t resume_ix, SrcState st) {
    if (inner.empty()) {
      walk(outer, resume_ix, std::move(st));
      return;
    }
    // Flatten: inner block followed by the outer continuation.
    Block combined = inner;
    combined.insert(combined.end(), outer.begin() + resume_ix, outer.end());
    walk(combined, 0, std::move(st));
  }
};

}  // namespace

std::vector<ThreadPath> source_thread_paths(const litmus::LitmusTest& test,
                                            const litmus::Thread& thread) {
  Walker w{test, thread, {}};
  SrcState st;
  w.walk(thread.body, 0, std::move(st));
  return w.out;
}

}  // namespace lct::engine
