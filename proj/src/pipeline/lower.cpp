#include "lct/pipeline/lower.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lct/litmus/error.hpp"

namespace lct::pipeline {

using litmus::AddrOperand;
using litmus::Block;
using litmus::Cond;
using litmus::Expr;
using litmus::ExprPtr;
using litmus::FenceKind;
using litmus::Instruction;
using litmus::LitmusTest;
using litmus::MemOrder;
using litmus::ObservableKey;
using litmus::Statement;
using litmus::Thread;
using litmus::Value;
using litmus::Width;

namespace {

// Per-thread lowering context. Address registers are odd X registers bound in
// the init section; data scratch registers are even W registers, so the two
// pools never alias architecturally.
struct ThreadLowering {
  const LitmusTest& test;
  int tid;
  std::set<std::string> observable_regs;
  std::set<std::string> reserved;  // source register names, kept verbatim

  std::vector<Instruction> code;
  std::map<std::pair<int, std::string>, Value>* reg_init;
  std::map<std::string, std::string> addr_reg;  // location -> X register
  int next_addr = 1;
  int next_scratch = 0;
  int next_label = 0;

  // Known-constant registers, the -O1 stand-in. Loads and RMWs invalidate.
  std::map<std::string, int64_t> consts;

  ThreadLowering(const LitmusTest& t, int id,
                 std::map<std::pair<int, std::string>, Value>* ri)
      : test(t), tid(id), reg_init(ri) {
    for (const auto& key : t.observables())
      if (key.kind == ObservableKey::Kind::Reg && key.thread == id)
        observable_regs.insert(key.name);
    for (const auto& [name, info] : t.thread(id)->registers) {
      (void)info;
      reserved.insert(name);
    }
  }

  std::optional<Width> suffix_for(const std::string& loc) const {
    Width w = test.init.locations.at(loc).width;
    if (w == Width::B64)
      throw Error(ErrorKind::UnsupportedConstruct,
                  "64-bit location '" + loc + "' is outside the builtin lowering subset");
    if (w == Width::B32) return std::nullopt;
    return w;
  }

  AddrOperand address_of(const std::string& loc) {
    auto it = addr_reg.find(loc);
    if (it == addr_reg.end()) {
      std::string reg;
      do {
        reg = "X" + std::to_string(next_addr);
        next_addr += 2;
      } while (reserved.count(reg));
      (*reg_init)[{tid, reg}] = Value::address(loc);
      it = addr_reg.emplace(loc, reg).first;
    }
    AddrOperand a;
    a.form = AddrOperand::Form::Reg;
    a.base = it->second;
    return a;
  }

  std::string fresh_scratch() {
    std::string reg;
    do {
      reg = "W" + std::to_string(next_scratch);
      next_scratch += 2;
    } while (reserved.count(reg));
    return reg;
  }

  std::string fresh_label() { return "L" + std::to_string(next_label++); }

  // Constant folding over the pure expression language. r == r holds for any
  // register value, so it folds without knowing the value.
  std::optional<int64_t> fold(const ExprPtr& e) const {
    if (!e) return std::nullopt;
    switch (e->op) {
      case Expr::Op::Const: return e->k;
      case Expr::Op::Reg: {
        auto it = consts.find(e->reg);
        if (it != consts.end()) return it->second;
        return std::nullopt;
      }
      case Expr::Op::Add: {
        auto a = fold(e->lhs), b = fold(e->rhs);
        if (a && b) return *a + *b;
        return std::nullopt;
      }
      case Expr::Op::Eq: {
        if (e->lhs->op == Expr::Op::Reg && e->rhs->op == Expr::Op::Reg &&
            e->lhs->reg == e->rhs->reg)
          return 1;
        auto a = fold(e->lhs), b = fold(e->rhs);
        if (a && b) return *a == *b ? 1 : 0;
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  // Strip +0 / 0+ identities so false dependencies disappear.
  ExprPtr simplify(const ExprPtr& e) const {
    if (!e) return e;
    if (auto k = fold(e)) return Expr::constant(*k);
    if (e->op == Expr::Op::Add) {
      ExprPtr l = simplify(e->lhs), r = simplify(e->rhs);
      if (auto k = fold(r); k && *k == 0) return l;
      if (auto k = fold(l); k && *k == 0) return r;
      return Expr::add(l, r);
    }
    return e;
  }

  void emit_mov_imm(const std::string& dst, int64_t k) {
    Instruction ins;
    ins.kind = Instruction::Kind::MovImm;
    ins.dst = dst;
    ins.imm = k;
    code.push_back(ins);
  }

  // Materialize an expression into a register. Constants get a fresh scratch
  // MOV per use site; plain register reads pass through unrenamed.
  std::string reg_of(const ExprPtr& expr) {
    ExprPtr e = simplify(expr);
    if (auto k = fold(e)) {
      std::string s = fresh_scratch();
      emit_mov_imm(s, *k);
      return s;
    }
    if (e->op == Expr::Op::Reg) return e->reg;
    if (e->op == Expr::Op::Add) {
      std::string lhs = reg_of(e->lhs);
      std::string dst = fresh_scratch();
      Instruction ins;
      ins.kind = Instruction::Kind::Add;
      ins.dst = dst;
      ins.src = lhs;
      if (auto k = fold(e->rhs))
        ins.imm = *k;
      else
        ins.src2 = reg_of(e->rhs);
      code.push_back(ins);
      return dst;
    }
    throw Error(ErrorKind::UnsupportedConstruct,
                "cannot lower '" + litmus::render_expr(e) + "' without a compare-and-set form");
  }

  static MemOrder load_order(MemOrder o) {
    switch (o) {
      case MemOrder::NA:
      case MemOrder::Rlx: return MemOrder::Rlx;
      case MemOrder::Acq:
      case MemOrder::SC: return MemOrder::Acq;
      default:
        throw Error(ErrorKind::UnsupportedConstruct, "load ordering outside the C11 subset");
    }
  }

  static MemOrder store_order(MemOrder o) {
    switch (o) {
      case MemOrder::NA:
      case MemOrder::Rlx: return MemOrder::Rlx;
      case MemOrder::Rel:
      case MemOrder::SC: return MemOrder::Rel;
      default:
        throw Error(ErrorKind::UnsupportedConstruct, "store ordering outside the C11 subset");
    }
  }

  // A register is dead at statement i if nothing later can read it and the
  // final predicate does not observe it. Redefinitions are not tracked; a
  // later appearance of the name keeps the assignment (conservative).
  static void collect_reads(const Block& b, size_t from, std::set<std::string>& reads) {
    for (size_t i = from; i < b.size(); ++i) {
      const Statement& st = b[i];
      collect_expr_reads(st.value, reads);
      collect_expr_reads(st.cond, reads);
      if (st.then_body) collect_reads(*st.then_body, 0, reads);
      if (st.else_body) collect_reads(*st.else_body, 0, reads);
    }
  }
  static void collect_expr_reads(const ExprPtr& e, std::set<std::string>& reads) {
    if (!e) return;
    if (e->op == Expr::Op::Reg) reads.insert(e->reg);
    collect_expr_reads(e->lhs, reads);
    collect_expr_reads(e->rhs, reads);
  }

  bool register_dead_after(const Block& b, size_t i, const std::string& reg,
                           const std::vector<const Block*>& continuations) const {
    if (observable_regs.count(reg)) return false;
    std::set<std::string> reads;
    collect_reads(b, i + 1, reads);
    for (const Block* cont : continuations) collect_reads(*cont, 0, reads);
    return !reads.count(reg);
  }

  void lower_block(const Block& b, const std::vector<const Block*>& continuations) {
    for (size_t i = 0; i < b.size(); ++i) {
      const Statement& st = b[i];
      switch (st.kind) {
        case Statement::Kind::Store: {
          Instruction ins;
          ins.kind = Instruction::Kind::Store;
          ins.src = reg_of(st.value);
          ins.addr = address_of(st.loc);
          ins.order = store_order(st.order);
          ins.width_suffix = suffix_for(st.loc);
          code.push_back(ins);
          break;
        }
        case Statement::Kind::Load: {
          Instruction ins;
          ins.kind = Instruction::Kind::Load;
          ins.dst = st.reg;
          ins.addr = address_of(st.loc);
          ins.order = load_order(st.order);
          ins.width_suffix = suffix_for(st.loc);
          code.push_back(ins);
          consts.erase(st.reg);
          break;
        }
        case Statement::Kind::FetchAdd:
        case Statement::Kind::Exchange: {
          bool dead = register_dead_after(b, i, st.reg, continuations);
          Instruction ins;
          ins.kind = st.kind == Statement::Kind::FetchAdd ? Instruction::Kind::LdAdd
                                                          : Instruction::Kind::Swp;
          ins.src = reg_of(st.value);
          ins.addr = address_of(st.loc);
          ins.order2 = litmus::rmw_write_order(st.order);
          if (dead) {
            // Result unused: the store-only form, which has no acquire
            // variant. The read half's ordering is silently dropped.
            ins.order = MemOrder::Rlx;
          } else {
            ins.dst = st.reg;
            ins.order = litmus::rmw_read_order(st.order) == MemOrder::Rlx ? MemOrder::Rlx
                                                                          : MemOrder::Acq;
          }
          ins.width_suffix = suffix_for(st.loc);
          code.push_back(ins);
          consts.erase(st.reg);
          break;
        }
        case Statement::Kind::Fence: {
          FenceKind fk;
          switch (st.order) {
            case MemOrder::Rlx: continue;  // no-op fence
            case MemOrder::Acq:
            case MemOrder::AcqPC: fk = FenceKind::Ld; break;
            default: fk = FenceKind::Full; break;
          }
          Instruction ins;
          ins.kind = Instruction::Kind::Dmb;
          ins.fence = fk;
          code.push_back(ins);
          break;
        }
        case Statement::Kind::Assign: {
          if (auto k = fold(st.value)) {
            consts[st.reg] = *k;
            if (observable_regs.count(st.reg)) emit_mov_imm(st.reg, *k);
            break;
          }
          consts.erase(st.reg);
          if (register_dead_after(b, i, st.reg, continuations)) break;
          ExprPtr e = simplify(st.value);
          if (e->op == Expr::Op::Reg) {
            Instruction ins;
            ins.kind = Instruction::Kind::MovReg;
            ins.dst = st.reg;
            ins.src = e->reg;
            code.push_back(ins);
          } else {
            reg_of(e);
            // reg_of materialized into a scratch; retarget the source register.
            code.back().dst = st.reg;
          }
          break;
        }
        case Statement::Kind::If: {
          const Block empty;
          const Block& then_b = st.then_body ? *st.then_body : empty;
          const Block& else_b = st.else_body ? *st.else_body : empty;
          // Liveness continuation for code inside the arms: the rest of this
          // block, then the enclosing continuations. Local per frame so
          // nested branches keep their own copies.
          Block rest_holder(b.begin() + static_cast<long>(i) + 1, b.end());
          std::vector<const Block*> conts = continuations;
          conts.insert(conts.begin(), &rest_holder);

          if (auto k = fold(st.cond)) {
            lower_block(*k ? then_b : else_b, conts);
            break;
          }
          if (litmus::block_equal(then_b, else_b)) {
            // Identical arms: the branch is unobservable and merges away.
            lower_block(then_b, conts);
            break;
          }
          lower_branch(st.cond, then_b, else_b, conts);
          break;
        }
      }
    }
  }

  void lower_branch(const ExprPtr& cond, const Block& then_b, const Block& else_b,
                    const std::vector<const Block*>& conts) {
    std::string l_else = fresh_label();
    std::string l_end = fresh_label();
    emit_branch_if_false(cond, l_else);
    auto saved = consts;
    lower_block(then_b, conts);
    Instruction b;
    b.kind = Instruction::Kind::B;
    b.label = l_end;
    code.push_back(b);
    Instruction lab;
    lab.kind = Instruction::Kind::Label;
    lab.label = l_else;
    code.push_back(lab);
    consts = saved;
    lower_block(else_b, conts);
    lab.label = l_end;
    code.push_back(lab);
    // Join: keep only facts common to both arms.
    std::map<std::string, int64_t> joined;
    for (const auto& [r, k] : consts) {
      auto it = saved.find(r);
      if (it != saved.end() && it->second == k) joined.emplace(r, k);
    }
    consts = joined;
  }

  void emit_branch_if_false(const ExprPtr& cond, const std::string& target) {
    ExprPtr c = simplify(cond);
    Instruction br;
    br.label = target;
    if (c->op == Expr::Op::Eq) {
      auto rk = fold(c->rhs);
      if (c->lhs->op == Expr::Op::Reg && rk && *rk == 0) {
        br.kind = Instruction::Kind::Cbnz;  // (r == 0) false when r != 0
        br.src = c->lhs->reg;
        code.push_back(br);
        return;
      }
      Instruction cmp;
      cmp.kind = Instruction::Kind::Subs;
      cmp.src = reg_of(c->lhs);
      cmp.dst = "WZR";
      if (rk)
        cmp.imm = *rk;
      else
        cmp.src2 = reg_of(c->rhs);
      code.push_back(cmp);
      br.kind = Instruction::Kind::BCond;
      br.cond = Cond::NE;
      code.push_back(br);
      return;
    }
    br.kind = Instruction::Kind::Cbz;  // boolean view: false when == 0
    br.src = reg_of(c);
    code.push_back(br);
  }
};

}  // namespace

LitmusTest lower_builtin(const LitmusTest& test) {
  if (test.dialect != litmus::Dialect::Source)
    throw Error(ErrorKind::DialectMismatch, "builtin lowering expects a source-dialect test");

  LitmusTest out;
  out.name = test.name;
  out.dialect = litmus::Dialect::Asm;
  out.isa = litmus::ISA::AArch64Sub;
  out.init.locations = test.init.locations;
  out.init.layout = test.init.layout;
  out.final_pred = test.final_pred;
  out.locations = test.locations;
  out.metadata = test.metadata;

  for (const auto& thread : test.threads) {
    ThreadLowering ctx(test, thread.id, &out.init.registers);
    ctx.lower_block(thread.body, {});
    Thread t;
    t.id = thread.id;
    t.code = std::move(ctx.code);
    for (const auto& [name, info] : thread.registers) t.registers[name] = info;
    out.threads.push_back(std::move(t));
  }
  return out;
}

}  // namespace lct::pipeline
