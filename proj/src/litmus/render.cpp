#include <set>
#include <sstream>

#include "lct/litmus/parse.hpp"

namespace lct::litmus {
namespace {

std::string type_name(Width w, bool is_signed) {
  if (is_signed && w == Width::B32) return "int";
  std::string base = "int" + std::to_string(static_cast<int>(w)) + "_t";
  return is_signed ? base : "u" + base;
}

std::string render_pred(const PredPtr& p, const LitmusTest& test, int prec = 0) {
  switch (p->op) {
    case PredNode::Op::True: return "true";
    case PredNode::Op::Atom:
      return test.observable_name(p->obs) + "=" + std::to_string(p->value);
    case PredNode::Op::Not: return "~" + render_pred(p->lhs, test, 3);
    case PredNode::Op::And: {
      std::string s = render_pred(p->lhs, test, 2) + " /\\ " + render_pred(p->rhs, test, 2);
      return prec > 2 ? "(" + s + ")" : s;
    }
    case PredNode::Op::Or: {
      std::string s = render_pred(p->lhs, test, 1) + " \\/ " + render_pred(p->rhs, test, 1);
      return prec > 1 ? "(" + s + ")" : s;
    }
  }
  return "true";
}

void render_statement(std::ostringstream& out, const Statement& s, const Thread& t,
                      std::set<std::string>& declared, int indent) {
  std::string pad(static_cast<size_t>(indent), ' ');
  auto decl = [&](const std::string& reg) -> std::string {
    if (reg.empty() || declared.count(reg)) return "";
    declared.insert(reg);
    auto it = t.registers.find(reg);
    RegisterInfo info = it == t.registers.end() ? RegisterInfo{} : it->second;
    return type_name(info.width, info.is_signed) + " ";
  };
  switch (s.kind) {
    case Statement::Kind::Store:
      if (s.order == MemOrder::NA) {
        out << pad << "*" << s.loc << " = " << render_expr(s.value) << ";\n";
      } else {
        out << pad << "atomic_store_explicit(" << s.loc << ", " << render_expr(s.value) << ", "
            << order_c11_name(s.order) << ");\n";
      }
      break;
    case Statement::Kind::Load:
      if (s.order == MemOrder::NA) {
        out << pad << decl(s.reg) << s.reg << " = *" << s.loc << ";\n";
      } else {
        out << pad << decl(s.reg) << s.reg << " = atomic_load_explicit(" << s.loc << ", "
            << order_c11_name(s.order) << ");\n";
      }
      break;
    case Statement::Kind::FetchAdd:
      out << pad << decl(s.reg) << s.reg << " = atomic_fetch_add_explicit(" << s.loc << ", "
          << render_expr(s.value) << ", " << order_c11_name(s.order) << ");\n";
      break;
    case Statement::Kind::Exchange:
      out << pad << decl(s.reg) << s.reg << " = atomic_exchange_explicit(" << s.loc << ", "
          << render_expr(s.value) << ", " << order_c11_name(s.order) << ");\n";
      break;
    case Statement::Kind::Fence:
      out << pad << "atomic_thread_fence(" << order_c11_name(s.order) << ");\n";
      break;
    case Statement::Kind::Assign:
      out << pad << decl(s.reg) << s.reg << " = " << render_expr(s.value) << ";\n";
      break;
    case Statement::Kind::If:
      out << pad << "if (" << render_expr(s.cond) << ") {\n";
      for (const auto& inner : *s.then_body) render_statement(out, inner, t, declared, indent + 2);
      out << pad << "}";
      if (s.else_body) {
        out << " else {\n";
        for (const auto& inner : *s.else_body) render_statement(out, inner, t, declared, indent + 2);
        out << pad << "}";
      }
      out << "\n";
      break;
  }
}

std::string render_addr(const AddrOperand& a) {
  switch (a.form) {
    case AddrOperand::Form::Reg: return "[" + a.base + "]";
    case AddrOperand::Form::RegLo12: return "[" + a.base + ", :lo12:" + a.sym + "]";
    case AddrOperand::Form::Sym: return "[" + a.sym + "]";
  }
  return "[?]";
}

std::string mem_mnemonic(const Instruction& ins, ISA isa) {
  std::string m;
  if (isa == ISA::AbstractISA) {
    switch (ins.kind) {
      case Instruction::Kind::Load: m = ins.order == MemOrder::Acq ? "LDA" : "LD"; break;
      case Instruction::Kind::Store: m = ins.order == MemOrder::Rel ? "STL" : "ST"; break;
      default: m = "?";
    }
    return m;
  }
  switch (ins.kind) {
    case Instruction::Kind::Load:
      m = ins.order == MemOrder::Acq ? "LDAR" : ins.order == MemOrder::AcqPC ? "LDAPR" : "LDR";
      break;
    case Instruction::Kind::Store:
      m = ins.order == MemOrder::Rel ? "STLR" : "STR";
      break;
    case Instruction::Kind::LdAdd:
      m = ins.dst.empty() ? "STADD" : "LDADD";
      if (!ins.dst.empty() && ins.order == MemOrder::Acq) m += "A";
      if (ins.order2 == MemOrder::Rel) m += "L";
      break;
    case Instruction::Kind::Swp:
      m = "SWP";
      if (ins.order == MemOrder::Acq) m += "A";
      if (ins.order2 == MemOrder::Rel) m += "L";
      break;
    case Instruction::Kind::Cas:
      m = "CAS";
      if (ins.order == MemOrder::Acq) m += "A";
      if (ins.order2 == MemOrder::Rel) m += "L";
      break;
    default: m = "?";
  }
  if (ins.width_suffix == Width::B8) m += "B";
  if (ins.width_suffix == Width::B16) m += "H";
  return m;
}

void render_instruction(std::ostringstream& out, const Instruction& ins, ISA isa) {
  using K = Instruction::Kind;
  if (ins.kind == K::Label) {
    out << ins.label << ":\n";
    return;
  }
  out << "  ";
  switch (ins.kind) {
    case K::Load: out << mem_mnemonic(ins, isa) << " " << ins.dst << ", " << render_addr(ins.addr); break;
    case K::Store: out << mem_mnemonic(ins, isa) << " " << ins.src << ", " << render_addr(ins.addr); break;
    case K::LdAdd:
      out << mem_mnemonic(ins, isa) << " " << ins.src;
      if (!ins.dst.empty()) out << ", " << ins.dst;
      out << ", " << render_addr(ins.addr);
      break;
    case K::Swp: out << mem_mnemonic(ins, isa) << " " << ins.src << ", " << ins.dst << ", " << render_addr(ins.addr); break;
    case K::Cas: out << mem_mnemonic(ins, isa) << " " << ins.dst << ", " << ins.src << ", " << render_addr(ins.addr); break;
    case K::Dmb:
      if (isa == ISA::AbstractISA) {
        out << "FENCE";
      } else {
        out << "DMB " << (ins.fence == FenceKind::Full ? "ISH" : ins.fence == FenceKind::Ld ? "ISHLD" : "ISHST");
      }
      break;
    case K::Adrp: out << "ADRP " << ins.dst << ", " << ins.sym; break;
    case K::Adr: out << "ADR " << ins.dst << ", " << ins.sym; break;
    case K::MovImm: out << "MOV " << ins.dst << ", #" << *ins.imm; break;
    case K::MovReg: out << "MOV " << ins.dst << ", " << ins.src; break;
    case K::Add:
    case K::Eor:
    case K::Subs:
      out << (ins.kind == K::Add ? "ADD" : ins.kind == K::Eor ? "EOR" : "SUBS") << " " << ins.dst
          << ", " << ins.src << ", ";
      if (!ins.sym.empty()) out << ":lo12:" << ins.sym;
      else if (ins.imm) out << "#" << *ins.imm;
      else out << ins.src2;
      break;
    case K::Cbz: out << "CBZ " << ins.src << ", " << ins.label; break;
    case K::Cbnz: out << "CBNZ " << ins.src << ", " << ins.label; break;
    case K::BCond: out << "B." << (ins.cond == Cond::EQ ? "EQ" : "NE") << " " << ins.label; break;
    case K::B: out << "B " << ins.label; break;
    case K::Stuck: out << "STUCK"; break;
    case K::Label: break;
  }
  out << "\n";
}

}  // namespace

std::string render_litmus(const LitmusTest& test) {
  std::ostringstream out;
  out << (test.dialect == Dialect::Source ? "C"
          : test.isa == ISA::AArch64Sub   ? "AArch64"
                                          : "ABS")
      << " " << test.name << "\n";
  for (const auto& [k, v] : test.metadata) out << "(* lct: " << k << "=" << v << " *)\n";

  out << "{";
  bool first = true;
  for (const auto& [name, info] : test.init.locations) {
    out << (first ? " " : "  ");
    first = false;
    if (!(info.width == Width::B32 && info.is_signed))
      out << type_name(info.width, info.is_signed) << " ";
    out << name << "=" << info.init.str() << ";";
  }
  for (const auto& [key, v] : test.init.registers) {
    out << (first ? " " : "  ");
    first = false;
    out << key.first << ":" << key.second << "=" << v.str() << ";";
  }
  out << " }\n\n";

  for (const auto& t : test.threads) {
    out << "P" << t.id << " {\n";
    if (test.dialect == Dialect::Source) {
      std::set<std::string> declared;
      for (const auto& s : t.body) render_statement(out, s, t, declared, 2);
    } else {
      for (const auto& ins : t.code) render_instruction(out, ins, test.isa);
    }
    out << "}\n\n";
  }

  if (!test.locations.empty()) {
    out << "locations [";
    for (const auto& key : test.locations) out << test.observable_name(key) << "; ";
    out << "]\n";
  }
  out << (test.final_pred.mode == FinalPredicate::Mode::Exists ? "exists" : "forall") << " ("
      << render_pred(test.final_pred.body, test) << ")\n";
  return out.str();
}

}  // namespace lct::litmus
