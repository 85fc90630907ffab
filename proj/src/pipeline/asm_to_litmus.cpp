#include "lct/pipeline/asm_to_litmus.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "lct/litmus/error.hpp"

namespace lct::pipeline {

using litmus::AddrOperand;
using litmus::Instruction;
using litmus::LitmusTest;
using litmus::ObservableKey;
using litmus::Statement;
using litmus::Thread;

namespace {

// W<k> and X<k> are views of one architectural register.
std::string canon(const std::string& reg) {
  if (reg.size() > 1 && (reg[0] == 'W' || reg[0] == 'X')) return "R" + reg.substr(1);
  return reg;
}

// The location a memory instruction addresses, when identifiable: the
// peephole's Sym form or a :lo12:-tagged base. Plain register-indirect
// addressing carries no symbol.
std::string loc_of(const Instruction& ins) {
  if (!ins.is_memory_access()) return "";
  if (ins.addr.form == AddrOperand::Form::Reg) return "";
  return ins.addr.sym;
}

// What a source statement's register read corresponds to in assembly.
std::optional<Instruction::Kind> asm_read_kind(Statement::Kind k) {
  switch (k) {
    case Statement::Kind::Load: return Instruction::Kind::Load;
    case Statement::Kind::FetchAdd: return Instruction::Kind::LdAdd;
    case Statement::Kind::Exchange: return Instruction::Kind::Swp;
    default: return std::nullopt;
  }
}

bool is_read_access(const Instruction& ins) {
  switch (ins.kind) {
    case Instruction::Kind::Load: return true;
    case Instruction::Kind::LdAdd:
    case Instruction::Kind::Swp:
    case Instruction::Kind::Cas:
      return !ins.dst.empty() && !litmus::is_zero_register(ins.dst);
    default: return false;
  }
}

struct SourceDef {
  Statement::Kind kind;
  std::string loc;
  int occurrence = 0;  // index among read accesses of loc in this thread
};

// Locate the statement defining an observable register, and its position in
// the per-location read-access sequence. Branch-nested definitions and reads
// of the same location under a branch make occurrence counting path-dependent
// and are rejected.
class SourceScanner {
 public:
  explicit SourceScanner(const litmus::Block& body) : body_(body) {}

  std::optional<SourceDef> find(const std::string& reg, std::string* why) {
    std::optional<SourceDef> found;
    std::map<std::string, int> read_count;
    for (const auto& st : body_) {
      bool defines = !st.reg.empty() && st.reg == reg;
      bool is_read = st.kind == Statement::Kind::Load ||
                     st.kind == Statement::Kind::FetchAdd ||
                     st.kind == Statement::Kind::Exchange;
      if (defines) {
        if (found) {
          *why = "defined more than once";
          return std::nullopt;
        }
        if (!is_read) {
          *why = "register-computed, not loaded from memory";
          return std::nullopt;
        }
        found = SourceDef{st.kind, st.loc, read_count[st.loc]};
      }
      if (is_read) ++read_count[st.loc];
      if (st.then_body || st.else_body) {
        if (branch_touches(st, reg, found ? found->loc : std::string())) {
          *why = "defined or re-read under a branch";
          return std::nullopt;
        }
      }
    }
    if (!found) *why = "never defined in the source thread";
    return found;
  }

  // After scanning, a second pass: any branch that defines `reg` or reads
  // `loc` breaks the straight-line occurrence count.
  bool branch_touches(const Statement& st, const std::string& reg, const std::string& loc) {
    auto touches = [&](const litmus::Block& b, auto&& self) -> bool {
      for (const auto& s : b) {
        if (!s.reg.empty() && s.reg == reg) return true;
        bool reads = s.kind == Statement::Kind::Load ||
                     s.kind == Statement::Kind::FetchAdd ||
                     s.kind == Statement::Kind::Exchange;
        if (reads && !loc.empty() && s.loc == loc) return true;
        if (s.then_body && self(*s.then_body, self)) return true;
        if (s.else_body && self(*s.else_body, self)) return true;
      }
      return false;
    };
    if (st.then_body && touches(*st.then_body, touches)) return true;
    if (st.else_body && touches(*st.else_body, touches)) return true;
    return false;
  }

 private:
  const litmus::Block& body_;
};

// Rename the architectural register written by `def` to the source register
// name, everywhere in the thread. Requires the register to be written exactly
// once and used only in its W form; anything else is a reuse pattern the
// rename cannot preserve.
void rename_register(std::vector<Instruction>& code, size_t def_index,
                     const std::string& new_name) {
  const std::string old = code[def_index].dst;
  if (old.empty() || old[0] != 'W')
    throw Error(ErrorKind::UnsupportedConstruct,
                "observable '" + new_name + "' lives in non-32-bit register '" + old + "'");
  const std::string c = canon(old);

  int writes = 0;
  for (const auto& ins : code) {
    if (!ins.dst.empty() && canon(ins.dst) == c) ++writes;
    if (canon(ins.addr.base) == c)
      throw Error(ErrorKind::UnsupportedConstruct,
                  "register '" + old + "' doubles as an address base; cannot rename to '" +
                      new_name + "'");
    for (const std::string* f : {&ins.src, &ins.src2})
      if (canon(*f) == c && (*f)[0] != 'W')
        throw Error(ErrorKind::UnsupportedConstruct,
                    "mixed-width use of '" + old + "'; cannot rename to '" + new_name + "'");
  }
  if (writes != 1)
    throw Error(ErrorKind::UnsupportedConstruct,
                "register '" + old + "' is written " + std::to_string(writes) +
                    " times; cannot rename to '" + new_name + "'");

  for (auto& ins : code) {
    if (canon(ins.dst) == c) ins.dst = new_name;
    if (canon(ins.src) == c) ins.src = new_name;
    if (canon(ins.src2) == c) ins.src2 = new_name;
  }
}

}  // namespace

AsmReconstruction asm_to_litmus(const ParsedDisasm& disasm, const LitmusTest& src,
                                const transforms::PeepholeOptions& opt_rules) {
  if (src.dialect != litmus::Dialect::Source)
    throw Error(ErrorKind::DialectMismatch, "reconstruction is keyed to a source-dialect test");

  // Threads pair with functions by exact P<k> name; anything unexpected is a
  // mismatch, never a guess.
  std::map<int, const std::vector<Instruction>*> by_id;
  std::set<std::string> seen;
  for (const auto& [name, code] : disasm.functions) {
    if (!seen.insert(name).second)
      throw Error(ErrorKind::UnsupportedConstruct, "duplicate function '" + name + "'");
    bool well_formed = name.size() > 1 && name[0] == 'P' &&
                       std::all_of(name.begin() + 1, name.end(),
                                   [](unsigned char ch) { return std::isdigit(ch); });
    if (!well_formed)
      throw Error(ErrorKind::UnsupportedConstruct,
                  "function '" + name + "' does not name a thread");
    by_id[std::stoi(name.substr(1))] = &code;
  }
  for (const auto& thread : src.threads)
    if (!by_id.count(thread.id))
      throw Error(ErrorKind::UnsupportedConstruct,
                  "no function for thread P" + std::to_string(thread.id));
  if (by_id.size() != src.threads.size())
    throw Error(ErrorKind::UnsupportedConstruct,
                "disassembly has " + std::to_string(by_id.size()) + " threads, source has " +
                    std::to_string(src.threads.size()));

  LitmusTest raw;
  raw.name = src.name;
  raw.dialect = litmus::Dialect::Asm;
  raw.isa = litmus::ISA::AArch64Sub;
  raw.init.locations = src.init.locations;
  raw.init.layout = src.init.layout;
  raw.final_pred = src.final_pred;
  raw.locations = src.locations;
  raw.metadata = src.metadata;
  for (const auto& thread : src.threads) {
    Thread t;
    t.id = thread.id;
    t.code = *by_id.at(thread.id);
    raw.threads.push_back(std::move(t));
  }

  AsmReconstruction result;
  auto [opt, stats] = transforms::optimize_asm(raw, opt_rules);
  result.opt_stats = std::move(stats);

  // Give every observable register its source name by locating the matching
  // read access: same kind, same location, same per-location occurrence.
  for (const auto& key : src.observables()) {
    if (key.kind != ObservableKey::Kind::Reg) continue;
    const Thread* src_thread = src.thread(key.thread);
    Thread* tgt_thread = nullptr;
    for (auto& t : opt.threads)
      if (t.id == key.thread) tgt_thread = &t;
    if (!src_thread || !tgt_thread)
      throw Error(ErrorKind::UndeclaredObservable,
                  "observable " + key.source_name() + " names a missing thread");

    std::string why;
    SourceScanner scanner(src_thread->body);
    auto def = scanner.find(key.name, &why);
    if (!def)
      throw Error(ErrorKind::UnsupportedConstruct,
                  "cannot match observable " + key.source_name() + ": " + why);

    Instruction::Kind want = *asm_read_kind(def->kind);
    int seen_reads = 0;
    std::optional<size_t> match;
    for (size_t i = 0; i < tgt_thread->code.size(); ++i) {
      const Instruction& ins = tgt_thread->code[i];
      if (!is_read_access(ins) || loc_of(ins) != def->loc) continue;
      if (seen_reads == def->occurrence) {
        if (ins.kind == want) match = i;
        break;
      }
      ++seen_reads;
    }
    if (!match) {
      result.warnings.push_back("observable " + key.source_name() +
                                ": defining access of '" + def->loc +
                                "' was compiled away; the register reads zero");
      continue;
    }
    rename_register(tgt_thread->code, *match, key.name);
    auto it = src_thread->registers.find(key.name);
    tgt_thread->registers[key.name] =
        it != src_thread->registers.end() ? it->second : litmus::RegisterInfo{};
  }

  result.test = std::move(opt);
  return result;
}

}  // namespace lct::pipeline
