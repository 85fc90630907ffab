#include <algorithm>
#include <cctype>
#include <set>

#include "lct/litmus/parse.hpp"
#include "parse_internal.hpp"

namespace lct::litmus {
namespace detail {

std::string normalize_register(const std::string& reg) {
  // X*/W* machine registers are case-insensitive; other names (r0, q1_r0)
  // are taken verbatim.
  if (reg.size() < 2) return reg;
  char head = static_cast<char>(std::toupper(static_cast<unsigned char>(reg[0])));
  if (head != 'X' && head != 'W') return reg;
  bool machine = true;
  for (size_t i = 1; i < reg.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(reg[i]))) machine = false;
  }
  std::string upper = reg;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  if (machine || upper == "XZR" || upper == "WZR") return upper;
  return reg;
}

namespace {

// `0:X1` / `P0_r0` / `1:r0` → register observable; bare name → location.
ObservableKey observable_from_parts(Cursor& c, const std::string& first, bool saw_colon,
                                    const std::string& second) {
  if (saw_colon) {
    for (char ch : first)
      if (!std::isdigit(static_cast<unsigned char>(ch))) c.fail("thread id");
    return ObservableKey::reg(std::stoi(first), normalize_register(second));
  }
  if (first.size() > 2 && first[0] == 'P') {
    size_t us = first.find('_');
    if (us != std::string::npos && us > 1) {
      bool digits = true;
      for (size_t i = 1; i < us; ++i)
        if (!std::isdigit(static_cast<unsigned char>(first[i]))) digits = false;
      if (digits)
        return ObservableKey::reg(std::stoi(first.substr(1, us - 1)),
                                  normalize_register(first.substr(us + 1)));
    }
  }
  return ObservableKey::mem(first);
}

}  // namespace

ObservableKey parse_observable(Cursor& c) {
  if (c.peek_number()) {
    int64_t tid = c.number();
    c.expect(":");
    std::string reg = c.ident();
    return ObservableKey::reg(static_cast<int>(tid), normalize_register(reg));
  }
  std::string first = c.ident();
  if (c.try_consume(":")) {
    std::string second = c.ident();
    return observable_from_parts(c, first, true, second);
  }
  return observable_from_parts(c, first, false, "");
}

namespace {

PredPtr parse_pred_or(Cursor& c);

PredPtr parse_pred_primary(Cursor& c) {
  if (c.try_consume("~")) return PredNode::negate(parse_pred_primary(c));
  if (c.try_consume("(")) {
    PredPtr p = parse_pred_or(c);
    c.expect(")");
    return p;
  }
  if (c.peek_is("true")) {
    c.expect("true");
    return PredNode::truth();
  }
  ObservableKey key = parse_observable(c);
  c.expect("=");
  if (!c.peek_number()) c.fail("integer literal");
  return PredNode::atom(std::move(key), c.number());
}

PredPtr parse_pred_and(Cursor& c) {
  PredPtr p = parse_pred_primary(c);
  while (c.try_consume("/\\")) p = PredNode::conj(p, parse_pred_primary(c));
  return p;
}

PredPtr parse_pred_or(Cursor& c) {
  PredPtr p = parse_pred_and(c);
  while (c.try_consume("\\/")) p = PredNode::disj(p, parse_pred_and(c));
  return p;
}

}  // namespace

FinalPredicate parse_final_predicate(Cursor& c) {
  FinalPredicate fp;
  if (c.try_consume("exists")) {
    fp.mode = FinalPredicate::Mode::Exists;
  } else if (c.try_consume("forall")) {
    fp.mode = FinalPredicate::Mode::Forall;
  } else {
    c.fail("'exists' or 'forall'");
  }
  c.expect("(");
  if (c.peek_is(")")) c.fail("final-state predicate");
  fp.body = parse_pred_or(c);
  c.expect(")");
  return fp;
}

std::vector<ObservableKey> parse_locations_directive(Cursor& c) {
  std::vector<ObservableKey> out;
  c.expect("[");
  while (!c.peek_is("]")) {
    out.push_back(parse_observable(c));
    if (!c.try_consume(";")) break;
  }
  c.expect("]");
  return out;
}

void parse_tail_sections(Cursor& c, LitmusTest& test) {
  bool have_pred = false;
  while (!c.eof()) {
    if (c.try_consume("locations")) {
      test.locations = parse_locations_directive(c);
    } else if (!have_pred && (c.peek_is("exists") || c.peek_is("forall"))) {
      test.final_pred = parse_final_predicate(c);
      have_pred = true;
    } else {
      break;
    }
  }
  if (!have_pred) c.fail("'exists' or 'forall'");
  if (!c.eof()) c.fail("end of test");
}

int parse_thread_label(const std::string& label) {
  if (label.size() < 2 || label[0] != 'P') return -1;
  if (!std::all_of(label.begin() + 1, label.end(), [](char ch) {
        return std::isdigit(static_cast<unsigned char>(ch));
      }))
    return -1;
  return std::stoi(label.substr(1));
}

void parse_init_block(Cursor& c, LitmusTest& test) {
  c.expect("{");
  while (!c.peek_is("}")) {
    if (c.peek_number()) {
      // `0:X1 = x` or `0:X1 = 5`: asm register initialization.
      int tid = static_cast<int>(c.number());
      c.expect(":");
      std::string reg = normalize_register(c.ident());
      c.expect("=");
      Value v;
      if (c.peek_number()) {
        v = Value::integer(c.number(), register_width(reg), false);
      } else {
        v = Value::address(c.ident());
      }
      if (!test.init.registers.emplace(std::make_pair(tid, reg), v).second)
        c.fail("unique register init");
    } else {
      std::string first = c.ident();
      bool is_signed = true;
      Width w = Width::B32;
      std::string name = first;
      if (c.peek_ident()) {  // `uint8_t x = 0`
        w = parse_width(first, is_signed);
        name = c.ident();
      }
      c.expect("=");
      LocationInfo info;
      info.width = w;
      info.is_signed = is_signed;
      if (c.peek_number()) {
        info.init = Value::integer(c.number(), w, is_signed);
      } else {
        info.init = Value::address(c.ident());
      }
      if (test.init.locations.count(name)) {
        // Reported by validate_test as DuplicateInit; last assignment wins so
        // parsing stays total on the grammar.
        test.init.duplicates.push_back(name);
      }
      test.init.locations[name] = info;
    }
    if (!c.try_consume(";")) break;
  }
  c.expect("}");
}

namespace {

void collect_source_locations(const Block& body, std::set<std::string>& locs) {
  for (const auto& s : body) {
    switch (s.kind) {
      case Statement::Kind::Store:
      case Statement::Kind::Load:
      case Statement::Kind::FetchAdd:
      case Statement::Kind::Exchange:
        locs.insert(s.loc);
        break;
      case Statement::Kind::If:
        if (s.then_body) collect_source_locations(*s.then_body, locs);
        if (s.else_body) collect_source_locations(*s.else_body, locs);
        break;
      default:
        break;
    }
  }
}

void collect_expr_registers(const ExprPtr& e, Thread& t) {
  if (!e) return;
  if (e->op == Expr::Op::Reg && !t.registers.count(e->reg)) t.registers[e->reg] = RegisterInfo{};
  collect_expr_registers(e->lhs, t);
  collect_expr_registers(e->rhs, t);
}

void collect_source_registers(const Block& body, Thread& t) {
  for (const auto& s : body) {
    if (!s.reg.empty() && !t.registers.count(s.reg)) t.registers[s.reg] = RegisterInfo{};
    collect_expr_registers(s.value, t);
    collect_expr_registers(s.cond, t);
    if (s.kind == Statement::Kind::If) {
      if (s.then_body) collect_source_registers(*s.then_body, t);
      if (s.else_body) collect_source_registers(*s.else_body, t);
    }
  }
}

void collect_asm_locations(const LitmusTest& test, std::set<std::string>& locs) {
  for (const auto& [key, v] : test.init.registers)
    if (v.is_address()) locs.insert(*v.addr);
  for (const auto& t : test.threads)
    for (const auto& ins : t.code) {
      if (ins.kind == Instruction::Kind::Adrp || ins.kind == Instruction::Kind::Adr)
        locs.insert(ins.sym);
      if (ins.is_memory_access() && ins.addr.form == AddrOperand::Form::Sym)
        locs.insert(ins.addr.sym);
    }
  // Pointer-valued initial memory (e.g. constant-pool slots) names locations.
  for (const auto& [name, info] : test.init.locations)
    if (info.init.is_address()) locs.insert(*info.init.addr);
}

void collect_asm_registers(Thread& t) {
  auto note = [&t](const std::string& r) {
    if (r.empty() || is_zero_register(r)) return;
    if (!t.registers.count(r)) t.registers[r] = RegisterInfo{register_width(r), true};
  };
  for (const auto& ins : t.code) {
    note(ins.dst);
    note(ins.src);
    note(ins.src2);
    if (ins.addr.form != AddrOperand::Form::Sym) note(ins.addr.base);
  }
}

}  // namespace

void normalize_test(LitmusTest& test) {
  // Register inventories per thread.
  for (auto& t : test.threads) {
    if (test.dialect == Dialect::Source)
      collect_source_registers(t.body, t);
    else
      collect_asm_registers(t);
  }

  // Final-predicate / locations-directive references: out-of-range thread ids
  // are errors; unknown registers on existing threads follow the
  // zero-initialization convention and are declared implicitly.
  std::vector<ObservableKey> named = pred_observables(test.final_pred.body);
  named.insert(named.end(), test.locations.begin(), test.locations.end());
  for (const auto& key : named) {
    if (key.kind != ObservableKey::Kind::Reg) continue;
    bool found = false;
    for (auto& t : test.threads) {
      if (t.id != key.thread) continue;
      found = true;
      if (!t.registers.count(key.name)) t.registers[key.name] = RegisterInfo{};
    }
    if (!found)
      throw Error(ErrorKind::UndeclaredObservable,
                  "final state names register of unknown thread: " + key.source_name());
  }

  // Implicit zero initialization for every referenced location.
  std::set<std::string> locs;
  if (test.dialect == Dialect::Source) {
    for (const auto& t : test.threads) collect_source_locations(t.body, locs);
  } else {
    collect_asm_locations(test, locs);
  }
  for (const auto& key : named)
    if (key.kind == ObservableKey::Kind::Mem) locs.insert(key.name);
  for (const auto& loc : locs) {
    if (!test.init.locations.count(loc)) {
      LocationInfo info;
      info.init = Value::integer(0, info.width, info.is_signed);
      test.init.locations[loc] = info;
    }
  }
}

}  // namespace detail

Width parse_width(const std::string& type_name, bool& is_signed) {
  is_signed = true;
  if (type_name == "int" || type_name == "int32_t") return Width::B32;
  if (type_name == "int8_t") return Width::B8;
  if (type_name == "int16_t") return Width::B16;
  if (type_name == "int64_t" || type_name == "long") return Width::B64;
  is_signed = false;
  if (type_name == "uint8_t") return Width::B8;
  if (type_name == "uint16_t") return Width::B16;
  if (type_name == "uint32_t" || type_name == "unsigned") return Width::B32;
  if (type_name == "uint64_t") return Width::B64;
  throw Error(ErrorKind::UnsupportedConstruct, "unknown type name: " + type_name);
}

LitmusTest parse_litmus(const std::string& text) {
  detail::Cursor probe(text);
  std::string keyword = probe.ident();
  if (keyword == "C") return parse_source_litmus(text);
  if (keyword == "AArch64") return parse_asm_litmus(text, ISA::AArch64Sub);
  if (keyword == "ABS") return parse_asm_litmus(text, ISA::AbstractISA);
  probe.fail("dialect keyword 'C', 'AArch64', or 'ABS'");
}

}  // namespace lct::litmus
