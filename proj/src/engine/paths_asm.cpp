#include <algorithm>
#include <map>
#include <set>

#include "lct/litmus/error.hpp"
#include "paths_internal.hpp"

namespace lct::engine {

namespace {

using litmus::AddrOperand;
using litmus::Cond;
using litmus::FenceKind;
using litmus::Instruction;
using litmus::LitmusTest;
using litmus::MemOrder;
using litmus::Thread;
using litmus::Value;
using litmus::Width;

// X5 and W5 are views of one machine register; both map to storage key "R5".
// Named registers (r0) are their own storage.
std::string canonical_reg(const std::string& reg) {
  if (reg.size() >= 2 && (reg[0] == 'X' || reg[0] == 'W')) {
    bool digits = std::all_of(reg.begin() + 1, reg.end(),
                              [](unsigned char c) { return std::isdigit(c); });
    if (digits) return "R" + reg.substr(1);
  }
  return reg;
}

struct AsmState {
  std::vector<PathAccess> accesses;
  std::vector<std::pair<SymPtr, bool>> constraints;
  std::map<std::string, SymPtr> env;             // canonical name -> value
  std::map<std::string, std::set<int>> taint;    // canonical name -> read slots
  std::set<int> ctrl_taint;
  SymPtr flags;
  std::set<int> flags_taint;
  int next_slot = 0;
  bool stuck = false;
};

struct ResolvedAddr {
  std::string loc;  // concrete location when known
  SymPtr expr;      // symbolic address otherwise
  std::set<int> deps;
};

struct Walker {
  const LitmusTest& test;
  const Thread& thread;
  std::map<std::string, size_t> labels;
  std::vector<ThreadPath> out;

  // Values are stored at machine-register width; 32-bit writes zero-extend,
  // matching AArch64 W-register semantics.
  SymPtr read_reg(AsmState& st, const std::string& reg) const {
    Width w = litmus::register_width(reg);
    if (litmus::is_zero_register(reg)) return sym_const(Value::integer(0, w, false));
    std::string key = canonical_reg(reg);
    auto it = st.env.find(key);
    if (it != st.env.end()) return sym_conv(it->second, w, false);
    return sym_conv(sym_const(init_value(reg, key)), w, false);
  }

  Value init_value(const std::string& reg, const std::string& key) const {
    const auto& regs = test.init.registers;
    std::vector<std::string> names{reg};
    if (!key.empty() && key[0] == 'R') {
      names.push_back("X" + key.substr(1));
      names.push_back("W" + key.substr(1));
    }
    for (const std::string& name : names) {
      auto it = regs.find({thread.id, name});
      if (it != regs.end()) return it->second;
    }
    return Value::integer(0, Width::B64, false);
  }

  void write_reg(AsmState& st, const std::string& reg, SymPtr v, std::set<int> deps) const {
    if (litmus::is_zero_register(reg) || reg.empty()) return;
    std::string key = canonical_reg(reg);
    st.env[key] = sym_conv(std::move(v), litmus::register_width(reg), false);
    st.taint[key] = std::move(deps);
  }

  std::set<int> taint_of(const AsmState& st, const std::string& reg) const {
    if (litmus::is_zero_register(reg) || reg.empty()) return {};
    auto it = st.taint.find(canonical_reg(reg));
    return it == st.taint.end() ? std::set<int>{} : it->second;
  }

  ResolvedAddr resolve_addr(AsmState& st, const AddrOperand& a) const {
    ResolvedAddr r;
    switch (a.form) {
      case AddrOperand::Form::Sym:
        r.loc = a.sym;
        return r;
      case AddrOperand::Form::Reg:
        r.expr = read_reg(st, a.base);
        break;
      case AddrOperand::Form::RegLo12:
        r.expr = sym_lo12(read_reg(st, a.base), a.sym);
        break;
    }
    r.deps = taint_of(st, a.base);
    if (auto v = sym_const_value(r.expr); v && v->is_address()) {
      r.loc = *v->addr;
      r.expr = nullptr;
    }
    return r;
  }

  PathAccess make_access(const AsmState& st, PathAccess::Kind kind, ResolvedAddr addr,
                         size_t pc) const {
    PathAccess a;
    a.kind = kind;
    a.loc = std::move(addr.loc);
    a.addr = std::move(addr.expr);
    a.is_signed = false;
    a.origin_stmt = static_cast<int>(pc);
    a.addr_deps.assign(addr.deps.begin(), addr.deps.end());
    a.ctrl_deps.assign(st.ctrl_taint.begin(), st.ctrl_taint.end());
    return a;
  }

  void finish(AsmState st) {
    ThreadPath p;
    p.thread = thread.id;
    p.choice_index = static_cast<int>(out.size());
    p.accesses = std::move(st.accesses);
    p.constraints = std::move(st.constraints);
    p.stuck = st.stuck;
    for (const auto& [reg, info] : thread.registers) {
      (void)info;
      p.final_regs[reg] = read_reg(st, reg);
    }
    out.push_back(std::move(p));
  }

  size_t target_of(const std::string& label, size_t pc) const {
    auto it = labels.find(label);
    if (it == labels.end())
      throw Error(ErrorKind::UnresolvedLabel, "branch target '" + label + "' undefined");
    if (it->second <= pc)
      throw Error(ErrorKind::UnsupportedConstruct,
                  "backward branch to '" + label + "'; unroll the test first");
    return it->second;
  }

  // Branches fork; a statically decided condition keeps one successor but
  // still contributes its syntactic control taint.
  void branch(AsmState st, SymPtr cond, std::set<int> cond_taint, bool taken_if_nonzero,
              size_t pc, size_t target) {
    st.ctrl_taint.insert(cond_taint.begin(), cond_taint.end());
    if (auto cv = sym_const_value(cond)) {
      bool nonzero = cv->canonical() != 0;
      walk(nonzero == taken_if_nonzero ? target : pc + 1, std::move(st));
      return;
    }
    AsmState taken = st;
    taken.constraints.emplace_back(cond, taken_if_nonzero);
    walk(target, std::move(taken));

    st.constraints.emplace_back(cond, !taken_if_nonzero);
    walk(pc + 1, std::move(st));
  }

  void walk(size_t pc, AsmState st) {
    const auto& code = thread.code;
    for (; pc < code.size(); ++pc) {
      const Instruction& ins = code[pc];
      switch (ins.kind) {
        case Instruction::Kind::Load: {
          ResolvedAddr addr = resolve_addr(st, ins.addr);
          Width w = litmus::access_width(ins);
          PathAccess a = make_access(st, PathAccess::Kind::Read, std::move(addr), pc);
          a.read_slot = st.next_slot++;
          a.width = w;
          a.order = ins.order;
          write_reg(st, ins.dst, sym_read(a.read_slot, w, false), {a.read_slot});
          st.accesses.push_back(std::move(a));
          break;
        }
        case Instruction::Kind::Store: {
          ResolvedAddr addr = resolve_addr(st, ins.addr);
          Width w = litmus::access_width(ins);
          PathAccess a = make_access(st, PathAccess::Kind::Write, std::move(addr), pc);
          a.width = w;
          a.order = ins.order;
          a.value = sym_conv(read_reg(st, ins.src), w, false);
          for (int s : taint_of(st, ins.src)) a.data_deps.push_back(s);
          st.accesses.push_back(std::move(a));
          break;
        }
        case Instruction::Kind::LdAdd:
        case Instruction::Kind::Swp: {
          ResolvedAddr addr = resolve_addr(st, ins.addr);
          Width w = litmus::access_width(ins);
          int read_ix = static_cast<int>(st.accesses.size());
          int slot = st.next_slot++;
          SymPtr old = sym_read(slot, w, false);
          SymPtr operand = read_reg(st, ins.src);

          PathAccess r = make_access(st, PathAccess::Kind::Read, addr, pc);
          r.read_slot = slot;
          r.width = w;
          r.order = ins.order;
          r.is_rmw_read = true;
          r.rmw_pair = read_ix + 1;
          st.accesses.push_back(std::move(r));

          PathAccess wr = make_access(st, PathAccess::Kind::Write, std::move(addr), pc);
          wr.width = w;
          wr.order = ins.order2;
          wr.is_rmw_write = true;
          wr.rmw_pair = read_ix;
          wr.value = sym_conv(ins.kind == Instruction::Kind::LdAdd ? sym_add(old, operand)
                                                                   : operand,
                              w, false);
          std::set<int> data = taint_of(st, ins.src);
          if (ins.kind == Instruction::Kind::LdAdd) data.insert(slot);
          wr.data_deps.assign(data.begin(), data.end());
          st.accesses.push_back(std::move(wr));

          write_reg(st, ins.dst, old, {slot});
          break;
        }
        case Instruction::Kind::Cas: {
          ResolvedAddr addr = resolve_addr(st, ins.addr);
          Width w = litmus::access_width(ins);
          int read_ix = static_cast<int>(st.accesses.size());
          int slot = st.next_slot++;
          SymPtr old = sym_read(slot, w, false);
          SymPtr expected = sym_conv(read_reg(st, ins.dst), w, false);
          SymPtr matched = sym_eq(old, expected);

          // Success arm: read-write pair, comparison holds.
          {
            AsmState succ = st;
            PathAccess r = make_access(succ, PathAccess::Kind::Read, addr, pc);
            r.read_slot = slot;
            r.width = w;
            r.order = ins.order;
            r.is_rmw_read = true;
            r.rmw_pair = read_ix + 1;
            succ.accesses.push_back(std::move(r));

            PathAccess wr = make_access(succ, PathAccess::Kind::Write, addr, pc);
            wr.width = w;
            wr.order = ins.order2;
            wr.is_rmw_write = true;
            wr.rmw_pair = read_ix;
            wr.value = sym_conv(read_reg(succ, ins.src), w, false);
            for (int s : taint_of(succ, ins.src)) wr.data_deps.push_back(s);
            succ.accesses.push_back(std::move(wr));

            succ.constraints.emplace_back(matched, true);
            write_reg(succ, ins.dst, old, {slot});
            walk(pc + 1, std::move(succ));
          }
          // Failure arm: load only, comparison fails.
          PathAccess r = make_access(st, PathAccess::Kind::Read, std::move(addr), pc);
          r.read_slot = slot;
          r.width = w;
          r.order = ins.order;
          st.accesses.push_back(std::move(r));
          st.constraints.emplace_back(matched, false);
          write_reg(st, ins.dst, old, {slot});
          walk(pc + 1, std::move(st));
          return;
        }
        case Instruction::Kind::Dmb: {
          PathAccess a;
          a.kind = PathAccess::Kind::Fence;
          a.order = MemOrder::Rlx;
          a.fence = ins.fence;
          a.origin_stmt = static_cast<int>(pc);
          a.ctrl_deps.assign(st.ctrl_taint.begin(), st.ctrl_taint.end());
          st.accesses.push_back(std::move(a));
          break;
        }
        case Instruction::Kind::Adrp:
        case Instruction::Kind::Adr:
          // Page granularity is not modelled; both forms yield the symbol address.
          write_reg(st, ins.dst, sym_const(Value::address(ins.sym)), {});
          break;
        case Instruction::Kind::MovImm:
          write_reg(st, ins.dst,
                    sym_const(Value::integer(*ins.imm, litmus::register_width(ins.dst), false)),
                    {});
          break;
        case Instruction::Kind::MovReg:
          write_reg(st, ins.dst, read_reg(st, ins.src), taint_of(st, ins.src));
          break;
        case Instruction::Kind::Add:
        case Instruction::Kind::Eor:
        case Instruction::Kind::Subs: {
          SymPtr a = read_reg(st, ins.src);
          std::set<int> deps = taint_of(st, ins.src);
          SymPtr v;
          if (ins.kind == Instruction::Kind::Add && !ins.sym.empty()) {
            v = sym_lo12(std::move(a), ins.sym);
          } else {
            SymPtr b = !ins.src2.empty()
                           ? read_reg(st, ins.src2)
                           : sym_const(Value::integer(ins.imm.value_or(0),
                                                      litmus::register_width(ins.src), false));
            auto s2 = taint_of(st, ins.src2);
            deps.insert(s2.begin(), s2.end());
            v = ins.kind == Instruction::Kind::Add   ? sym_add(std::move(a), std::move(b))
                : ins.kind == Instruction::Kind::Eor ? sym_xor(std::move(a), std::move(b))
                                                     : sym_sub(std::move(a), std::move(b));
          }
          if (ins.kind == Instruction::Kind::Subs) {
            st.flags = v;
            st.flags_taint = deps;
          }
          write_reg(st, ins.dst, std::move(v), std::move(deps));
          break;
        }
        case Instruction::Kind::Cbz:
        case Instruction::Kind::Cbnz: {
          SymPtr cond = read_reg(st, ins.src);
          std::set<int> deps = taint_of(st, ins.src);
          branch(std::move(st), std::move(cond), std::move(deps),
                 ins.kind == Instruction::Kind::Cbnz, pc, target_of(ins.label, pc));
          return;
        }
        case Instruction::Kind::BCond: {
          SymPtr flags = st.flags ? st.flags : sym_const(Value::integer(0, Width::B32, false));
          std::set<int> deps = st.flags_taint;
          branch(std::move(st), std::move(flags), std::move(deps), ins.cond == Cond::NE, pc,
                 target_of(ins.label, pc));
          return;
        }
        case Instruction::Kind::B:
          pc = target_of(ins.label, pc) - 1;
          break;
        case Instruction::Kind::Label:
          break;
        case Instruction::Kind::Stuck:
          st.stuck = true;
          finish(std::move(st));
          return;
      }
    }
    finish(std::move(st));
  }
};

bool has_backward_branch(const Thread& t) {
  std::map<std::string, size_t> labels;
  for (size_t i = 0; i < t.code.size(); ++i)
    if (t.code[i].kind == Instruction::Kind::Label) labels.emplace(t.code[i].label, i);
  for (size_t i = 0; i < t.code.size(); ++i) {
    const Instruction& ins = t.code[i];
    if (ins.label.empty() || ins.kind == Instruction::Kind::Label) continue;
    auto it = labels.find(ins.label);
    if (it != labels.end() && it->second <= i) return true;
  }
  return false;
}

}  // namespace

std::vector<ThreadPath> asm_thread_paths(const LitmusTest& test, const Thread& thread) {
  Walker w{test, thread, {}, {}};
  for (size_t i = 0; i < thread.code.size(); ++i)
    if (thread.code[i].kind == Instruction::Kind::Label)
      w.labels.emplace(thread.code[i].label, i);
  w.walk(0, AsmState{});
  return w.out;
}

std::vector<ThreadPath> thread_paths(const LitmusTest& test, const Thread& thread) {
  return test.dialect == litmus::Dialect::Source ? source_thread_paths(test, thread)
                                                 : asm_thread_paths(test, thread);
}

litmus::LitmusTest unroll(const litmus::LitmusTest& test, int factor) {
  if (factor < 1) throw Error(ErrorKind::BadConfig, "unroll factor must be >= 1");
  LitmusTest out = test;
  if (test.dialect == litmus::Dialect::Source) return out;

  for (Thread& t : out.threads) {
    if (!has_backward_branch(t)) continue;

    std::map<std::string, size_t> labels;
    for (size_t i = 0; i < t.code.size(); ++i)
      if (t.code[i].kind == Instruction::Kind::Label) labels.emplace(t.code[i].label, i);

    const std::string done = "__lct_done";
    const std::string stuck = "__lct_stuck";
    auto copy_label = [](const std::string& l, int iter) {
      return l + "__u" + std::to_string(iter);
    };

    std::vector<Instruction> code;
    for (int iter = 0; iter < factor; ++iter) {
      for (size_t i = 0; i < t.code.size(); ++i) {
        Instruction ins = t.code[i];
        if (ins.kind == Instruction::Kind::Label) {
          ins.label = copy_label(ins.label, iter);
        } else if (!ins.label.empty()) {
          auto it = labels.find(ins.label);
          bool backward = it != labels.end() && it->second <= i;
          // A backward branch continues in the next copy; the last copy's
          // residual iterations are a dead end.
          ins.label = backward ? (iter + 1 < factor ? copy_label(ins.label, iter + 1) : stuck)
                               : copy_label(ins.label, iter);
        }
        code.push_back(std::move(ins));
      }
      Instruction b;
      b.kind = Instruction::Kind::B;
      b.label = done;
      code.push_back(std::move(b));
    }
    Instruction sl;
    sl.kind = Instruction::Kind::Label;
    sl.label = stuck;
    code.push_back(std::move(sl));
    Instruction si;
    si.kind = Instruction::Kind::Stuck;
    code.push_back(std::move(si));
    Instruction dl;
    dl.kind = Instruction::Kind::Label;
    dl.label = done;
    code.push_back(std::move(dl));

    t.code = std::move(code);
  }
  return out;
}

}  // namespace lct::engine
