#include "lct/transforms/peephole.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "lct/litmus/error.hpp"

namespace lct::transforms {

using litmus::AddrOperand;
using litmus::Dialect;
using lct::Error;
using lct::ErrorKind;
using litmus::Instruction;
using litmus::LitmusTest;
using litmus::ObservableKey;
using litmus::Thread;

namespace {

// X5 and W5 are views of one machine register; both map to storage key "R5".
std::string canonical_reg(const std::string& reg) {
  if (reg.size() >= 2 && (reg[0] == 'X' || reg[0] == 'W')) {
    bool digits = std::all_of(reg.begin() + 1, reg.end(),
                              [](unsigned char c) { return std::isdigit(c); });
    if (digits) return "R" + reg.substr(1);
  }
  return reg;
}

void add_reg(std::set<std::string>& regs, const std::string& name) {
  if (!name.empty() && !litmus::is_zero_register(name)) regs.insert(canonical_reg(name));
}

// Registers an instruction reads. CAS reads dst (the expected value);
// LDADD/SWP write dst without reading it.
std::set<std::string> reads_of(const Instruction& ins) {
  using K = Instruction::Kind;
  std::set<std::string> r;
  if (ins.is_memory_access() && ins.addr.form != AddrOperand::Form::Sym)
    add_reg(r, ins.addr.base);
  switch (ins.kind) {
    case K::Load:
      break;
    case K::Store:
    case K::LdAdd:
    case K::Swp:
      add_reg(r, ins.src);
      break;
    case K::Cas:
      add_reg(r, ins.src);
      add_reg(r, ins.dst);
      break;
    case K::MovReg:
      add_reg(r, ins.src);
      break;
    case K::Add:
    case K::Eor:
    case K::Subs:
      add_reg(r, ins.src);
      add_reg(r, ins.src2);
      break;
    case K::Cbz:
    case K::Cbnz:
      add_reg(r, ins.src);
      break;
    default:
      break;
  }
  return r;
}

std::optional<std::string> written_reg(const Instruction& ins) {
  using K = Instruction::Kind;
  switch (ins.kind) {
    case K::Load:
    case K::LdAdd:
    case K::Swp:
    case K::Cas:
    case K::Adrp:
    case K::Adr:
    case K::MovImm:
    case K::MovReg:
    case K::Add:
    case K::Eor:
    case K::Subs:
      if (ins.dst.empty() || litmus::is_zero_register(ins.dst)) return std::nullopt;
      return canonical_reg(ins.dst);
    default:
      return std::nullopt;
  }
}

bool has_backward_branch(const std::vector<Instruction>& code) {
  std::map<std::string, size_t> labels;
  for (size_t i = 0; i < code.size(); ++i)
    if (code[i].kind == Instruction::Kind::Label) labels[code[i].label] = i;
  for (size_t i = 0; i < code.size(); ++i) {
    const Instruction& ins = code[i];
    if (ins.kind != Instruction::Kind::B && ins.kind != Instruction::Kind::Cbz &&
        ins.kind != Instruction::Kind::Cbnz && ins.kind != Instruction::Kind::BCond)
      continue;
    auto it = labels.find(ins.label);
    if (it != labels.end() && it->second <= i) return true;
  }
  return false;
}

bool mentions_symbol(const Instruction& ins, const std::string& sym) {
  return ins.sym == sym || ((ins.addr.form == AddrOperand::Form::RegLo12 ||
                             ins.addr.form == AddrOperand::Form::Sym) &&
                            ins.addr.sym == sym);
}

// Statically known register contents: the page or full address of a symbol.
struct SymAddr {
  enum class Kind { Page, Full };
  Kind kind;
  std::string sym;
};

int count_events(const LitmusTest& test) {
  int n = 0;
  for (const auto& t : test.threads)
    for (const auto& ins : t.code)
      if (ins.is_memory_access()) ++n;
  return n;
}

int count_instructions(const LitmusTest& test) {
  int n = 0;
  for (const auto& t : test.threads) n += static_cast<int>(t.code.size());
  return n;
}

struct Optimizer {
  const PeepholeOptions& opts;
  LitmusTest& test;
  OptStats& stats;
  std::set<std::string> violated;  // dedup guard-violation reports

  void fire(const std::string& rule) { ++stats.rules_fired[rule]; }

  void violation(const std::string& msg) {
    if (violated.insert(msg).second) stats.guard_violations.push_back(msg);
  }

  bool observable_reg(const Thread& t, const std::string& reg) const {
    std::string key = canonical_reg(reg);
    for (const auto& obs : test.observables())
      if (obs.kind == ObservableKey::Kind::Reg && obs.thread == t.id &&
          canonical_reg(obs.name) == key)
        return true;
    return false;
  }

  // A pointer slot may collapse only when nothing but this thread's
  // Adrp/:lo12: loads can name it: no store targets it, no other thread or
  // initial register/location value mentions it, and it is not observed.
  bool private_pointer_slot(const Thread& t, const std::string& slot) {
    auto it = test.init.locations.find(slot);
    if (it == test.init.locations.end() || !it->second.init.addr) return false;
    std::string why;
    for (const auto& obs : test.observables())
      if (obs.kind == ObservableKey::Kind::Mem && obs.name == slot) why = "slot is observable";
    for (const auto& [key, value] : test.init.registers)
      if (value.addr && *value.addr == slot && why.empty())
        why = "slot address escapes via an initial register";
    for (const auto& [loc, info] : test.init.locations)
      if (loc != slot && info.init.addr && *info.init.addr == slot && why.empty())
        why = "slot address escapes via initial memory";
    for (const auto& other : test.threads) {
      for (const auto& ins : other.code) {
        if (!mentions_symbol(ins, slot)) continue;
        bool benign = other.id == t.id &&
                      (ins.kind == Instruction::Kind::Adrp || ins.kind == Instruction::Kind::Adr ||
                       (ins.kind == Instruction::Kind::Load &&
                        ins.addr.form == AddrOperand::Form::RegLo12 && ins.addr.sym == slot));
        if (!benign && why.empty())
          why = other.id == t.id ? "slot is written or its address escapes"
                                 : "slot is shared with another thread";
      }
    }
    if (!why.empty()) {
      violation("P" + std::to_string(t.id) + ": pool-load on " + slot + " blocked: " + why);
      return false;
    }
    return true;
  }

  // One forward pass per thread: propagate statically known addresses,
  // collapse private pointer-slot loads, fold known addresses into direct
  // symbolic operands.
  bool propagate(Thread& t) {
    bool changed = false;
    std::map<std::string, SymAddr> env;
    for (auto& ins : t.code) {
      using K = Instruction::Kind;
      if (ins.kind == K::Label) {  // join point: facts from fallthrough only
        env.clear();
        continue;
      }
      // Fold a fully known address into the direct symbolic form.
      if (ins.is_memory_access() && opts.fold_known_address) {
        if (ins.addr.form == AddrOperand::Form::Reg) {
          auto it = env.find(canonical_reg(ins.addr.base));
          if (it != env.end() && it->second.kind == SymAddr::Kind::Full) {
            ins.addr = AddrOperand{AddrOperand::Form::Sym, "", it->second.sym};
            fire("fold-address");
            changed = true;
          }
        } else if (ins.addr.form == AddrOperand::Form::RegLo12) {
          auto it = env.find(canonical_reg(ins.addr.base));
          if (it != env.end() && it->second.kind == SymAddr::Kind::Page &&
              it->second.sym == ins.addr.sym) {
            bool collapsed = false;
            if (ins.kind == K::Load && opts.collapse_pool_load &&
                private_pointer_slot(t, ins.addr.sym)) {
              // The slot load becomes the pointee's address materialization.
              std::string target = *test.init.locations.at(ins.addr.sym).init.addr;
              std::string dst = ins.dst;
              ins = Instruction{};
              ins.kind = K::Adr;
              ins.dst = dst;
              ins.sym = target;  // the Adr case below records the new fact
              fire("pool-load");
              collapsed = true;
              changed = true;
            }
            if (!collapsed) {
              ins.addr = AddrOperand{AddrOperand::Form::Sym, "", ins.addr.sym};
              fire("fold-address");
              changed = true;
            }
          }
        }
      }
      switch (ins.kind) {
        case K::Adr:
          if (!litmus::is_zero_register(ins.dst))
            env[canonical_reg(ins.dst)] = SymAddr{SymAddr::Kind::Full, ins.sym};
          break;
        case K::Adrp:
          if (!litmus::is_zero_register(ins.dst))
            env[canonical_reg(ins.dst)] = SymAddr{SymAddr::Kind::Page, ins.sym};
          break;
        case K::Add:
          // ADD Xd, Xn, :lo12:S on the page of S yields the full address.
          if (!ins.sym.empty()) {
            auto it = env.find(canonical_reg(ins.src));
            if (it != env.end() && it->second.kind == SymAddr::Kind::Page &&
                it->second.sym == ins.sym) {
              env[canonical_reg(ins.dst)] = SymAddr{SymAddr::Kind::Full, ins.sym};
              break;
            }
          }
          env.erase(canonical_reg(ins.dst));
          break;
        default:
          if (auto w = written_reg(ins)) env.erase(*w);
          break;
      }
    }
    return changed;
  }

  // Remove address/value materializations whose destination is never read.
  // Backward branches would let an earlier read observe the removed write, so
  // the rule stands down for such threads.
  bool drop_dead(Thread& t) {
    if (has_backward_branch(t.code)) return false;
    bool changed = false;
    for (size_t i = t.code.size(); i-- > 0;) {
      const Instruction& ins = t.code[i];
      using K = Instruction::Kind;
      if (ins.kind != K::Adr && ins.kind != K::Adrp && ins.kind != K::MovImm &&
          ins.kind != K::MovReg && ins.kind != K::Add && ins.kind != K::Eor)
        continue;
      auto dst = written_reg(ins);
      if (!dst) continue;
      if (observable_reg(t, *dst)) continue;
      bool read_later = false;
      for (size_t j = i + 1; j < t.code.size() && !read_later; ++j)
        read_later = reads_of(t.code[j]).count(*dst) != 0;
      if (read_later) continue;
      t.code.erase(t.code.begin() + static_cast<std::ptrdiff_t>(i));
      fire("dead-move");
      changed = true;
    }
    return changed;
  }

  void run() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (auto& t : test.threads) {
        if (opts.collapse_pool_load || opts.fold_known_address) changed |= propagate(t);
        if (opts.drop_dead_moves) changed |= drop_dead(t);
      }
    }
  }
};

}  // namespace

std::pair<LitmusTest, OptStats> optimize_asm(const LitmusTest& test, const PeepholeOptions& opts) {
  if (test.dialect != Dialect::Asm)
    throw Error(ErrorKind::DialectMismatch, "peephole optimizer applies to assembly tests only");
  LitmusTest out = test;
  OptStats stats;
  stats.events_before = count_events(out);
  stats.instructions_before = count_instructions(out);
  Optimizer opt{opts, out, stats, {}};
  opt.run();
  stats.events_after = count_events(out);
  stats.instructions_after = count_instructions(out);
  return {std::move(out), std::move(stats)};
}

PeepholeOptions parse_rule_list(const std::string& rules) {
  PeepholeOptions opts{false, false, false};
  if (rules.empty() || rules == "none") return opts;
  if (rules == "all") return PeepholeOptions{};
  std::stringstream ss(rules);
  std::string name;
  while (std::getline(ss, name, ',')) {
    if (name == "pool-load")
      opts.collapse_pool_load = true;
    else if (name == "fold-address")
      opts.fold_known_address = true;
    else if (name == "dead-move")
      opts.drop_dead_moves = true;
    else
      throw Error(ErrorKind::BadConfig, "unknown peephole rule: '" + name + "'");
  }
  return opts;
}

}  // namespace lct::transforms
