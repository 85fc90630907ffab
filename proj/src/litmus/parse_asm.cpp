#include <algorithm>
#include <cctype>

#include "lct/litmus/parse.hpp"
#include "parse_internal.hpp"

namespace lct::litmus {
namespace {

using detail::Cursor;
using detail::normalize_register;

struct MnemonicInfo {
  Instruction::Kind kind;
  MemOrder order = MemOrder::Rlx;   // load/store, or RMW read half
  MemOrder order2 = MemOrder::Rlx;  // RMW write half
  std::optional<Width> width;
  bool discards_old = false;  // STADD family
};

// Exact-match mnemonic tables; anything else is UnknownMnemonic.
std::optional<MnemonicInfo> lookup_aarch64(const std::string& m) {
  using K = Instruction::Kind;
  auto mem = [](K k, MemOrder o, std::optional<Width> w) {
    MnemonicInfo i;
    i.kind = k;
    i.order = o;
    i.width = w;
    return i;
  };
  if (m == "LDR") return mem(K::Load, MemOrder::Rlx, {});
  if (m == "LDRB") return mem(K::Load, MemOrder::Rlx, Width::B8);
  if (m == "LDRH") return mem(K::Load, MemOrder::Rlx, Width::B16);
  if (m == "LDAR") return mem(K::Load, MemOrder::Acq, {});
  if (m == "LDARB") return mem(K::Load, MemOrder::Acq, Width::B8);
  if (m == "LDARH") return mem(K::Load, MemOrder::Acq, Width::B16);
  if (m == "LDAPR") return mem(K::Load, MemOrder::AcqPC, {});
  if (m == "LDAPRB") return mem(K::Load, MemOrder::AcqPC, Width::B8);
  if (m == "LDAPRH") return mem(K::Load, MemOrder::AcqPC, Width::B16);
  if (m == "STR") return mem(K::Store, MemOrder::Rlx, {});
  if (m == "STRB") return mem(K::Store, MemOrder::Rlx, Width::B8);
  if (m == "STRH") return mem(K::Store, MemOrder::Rlx, Width::B16);
  if (m == "STLR") return mem(K::Store, MemOrder::Rel, {});
  if (m == "STLRB") return mem(K::Store, MemOrder::Rel, Width::B8);
  if (m == "STLRH") return mem(K::Store, MemOrder::Rel, Width::B16);

  // RMW families: optional A (acquire read), L (release write), B/H width.
  for (const char* base : {"LDADD", "SWP", "CAS", "STADD"}) {
    std::string b = base;
    if (m.compare(0, b.size(), b) != 0) continue;
    std::string rest = m.substr(b.size());
    MnemonicInfo i;
    i.kind = b == "SWP" ? K::Swp : b == "CAS" ? K::Cas : K::LdAdd;
    i.discards_old = b == "STADD";
    if (!rest.empty() && rest[0] == 'A' && !i.discards_old) {
      i.order = MemOrder::Acq;
      rest = rest.substr(1);
    }
    if (!rest.empty() && rest[0] == 'L') {
      i.order2 = MemOrder::Rel;
      rest = rest.substr(1);
    }
    if (rest == "B")
      i.width = Width::B8;
    else if (rest == "H")
      i.width = Width::B16;
    else if (!rest.empty())
      return std::nullopt;
    return i;
  }

  MnemonicInfo i;
  if (m == "DMB") i.kind = K::Dmb;
  else if (m == "ADRP") i.kind = K::Adrp;
  else if (m == "ADR") i.kind = K::Adr;
  else if (m == "MOV") i.kind = K::MovImm;  // refined by operands
  else if (m == "ADD") i.kind = K::Add;
  else if (m == "EOR") i.kind = K::Eor;
  else if (m == "SUBS") i.kind = K::Subs;
  else if (m == "CBZ") i.kind = K::Cbz;
  else if (m == "CBNZ") i.kind = K::Cbnz;
  else if (m == "B") i.kind = K::B;  // refined to BCond by a `.cond` suffix
  else if (m == "STUCK") i.kind = K::Stuck;
  else return std::nullopt;
  return i;
}

std::optional<MnemonicInfo> lookup_abstract(const std::string& m) {
  using K = Instruction::Kind;
  MnemonicInfo i;
  if (m == "LD") i.kind = K::Load;
  else if (m == "LDA") { i.kind = K::Load; i.order = MemOrder::Acq; }
  else if (m == "ST") i.kind = K::Store;
  else if (m == "STL") { i.kind = K::Store; i.order = MemOrder::Rel; }
  else if (m == "FENCE") { i.kind = K::Dmb; }
  else if (m == "MOV") i.kind = K::MovImm;
  else if (m == "ADD") i.kind = K::Add;
  else if (m == "EOR") i.kind = K::Eor;
  else if (m == "SUBS") i.kind = K::Subs;
  else if (m == "CBZ") i.kind = K::Cbz;
  else if (m == "CBNZ") i.kind = K::Cbnz;
  else if (m == "B") i.kind = K::B;
  else if (m == "STUCK") i.kind = K::Stuck;
  else return std::nullopt;
  return i;
}

AddrOperand parse_addr(Cursor& c) {
  AddrOperand a;
  c.expect("[");
  std::string name = c.ident();
  std::string reg = normalize_register(name);
  // X/W machine registers are bases; any other name is a direct symbol.
  bool machine_reg = false;
  if (reg.size() >= 2 && (reg[0] == 'X' || reg[0] == 'W')) {
    bool digits = std::all_of(reg.begin() + 1, reg.end(),
                              [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); });
    machine_reg = digits || reg == "XZR" || reg == "WZR";
  }
  if (machine_reg) {
    a.base = reg;
    if (c.try_consume(",")) {
      c.expect(":lo12:");
      a.sym = c.ident();
      a.form = AddrOperand::Form::RegLo12;
    } else {
      a.form = AddrOperand::Form::Reg;
    }
  } else {
    a.sym = name;
    a.form = AddrOperand::Form::Sym;
  }
  c.expect("]");
  return a;
}

std::string parse_reg(Cursor& c) { return normalize_register(c.ident()); }

Instruction parse_instruction(Cursor& c, ISA isa, const std::string& mnemonic_raw) {
  std::string m = mnemonic_raw;
  std::transform(m.begin(), m.end(), m.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
  auto info = isa == ISA::AArch64Sub ? lookup_aarch64(m) : lookup_abstract(m);
  if (!info) throw Error(ErrorKind::UnknownMnemonic, "unknown mnemonic: " + mnemonic_raw);

  using K = Instruction::Kind;
  Instruction ins;
  ins.kind = info->kind;
  ins.order = info->order;
  ins.order2 = info->order2;
  ins.width_suffix = info->width;

  switch (info->kind) {
    case K::Load:
      ins.dst = parse_reg(c);
      c.expect(",");
      ins.addr = parse_addr(c);
      break;
    case K::Store:
      ins.src = parse_reg(c);
      c.expect(",");
      ins.addr = parse_addr(c);
      break;
    case K::LdAdd:
    case K::Swp:
    case K::Cas:
      if (info->kind == K::Cas) {
        ins.dst = parse_reg(c);  // expected in / old out
        c.expect(",");
        ins.src = parse_reg(c);  // new value
      } else {
        ins.src = parse_reg(c);  // addend / new value
        if (!info->discards_old) {
          c.expect(",");
          ins.dst = parse_reg(c);  // old value
        }
      }
      c.expect(",");
      ins.addr = parse_addr(c);
      break;
    case K::Dmb: {
      if (isa == ISA::AbstractISA) {
        ins.fence = FenceKind::Full;
        break;
      }
      std::string dom = c.ident();
      std::transform(dom.begin(), dom.end(), dom.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
      if (dom == "ISH") ins.fence = FenceKind::Full;
      else if (dom == "ISHLD") ins.fence = FenceKind::Ld;
      else if (dom == "ISHST") ins.fence = FenceKind::St;
      else c.fail("DMB domain ISH, ISHLD, or ISHST");
      break;
    }
    case K::Adrp:
    case K::Adr:
      ins.dst = parse_reg(c);
      c.expect(",");
      ins.sym = c.ident();
      break;
    case K::MovImm:
      ins.dst = parse_reg(c);
      c.expect(",");
      if (c.try_consume("#")) {
        ins.imm = c.number();
      } else if (c.peek_number()) {
        ins.imm = c.number();
      } else {
        ins.kind = K::MovReg;
        ins.src = parse_reg(c);
      }
      break;
    case K::Add:
    case K::Eor:
    case K::Subs:
      ins.dst = parse_reg(c);
      c.expect(",");
      ins.src = parse_reg(c);
      c.expect(",");
      if (c.try_consume(":lo12:")) {
        if (ins.kind != K::Add) c.fail(":lo12: only on ADD");
        ins.sym = c.ident();
      } else if (c.try_consume("#")) {
        ins.imm = c.number();
      } else if (c.peek_number()) {
        ins.imm = c.number();
      } else {
        ins.src2 = parse_reg(c);
      }
      break;
    case K::Cbz:
    case K::Cbnz:
      ins.src = parse_reg(c);
      c.expect(",");
      ins.label = c.ident();
      break;
    case K::B:
      if (c.try_consume(".")) {
        ins.kind = K::BCond;
        std::string cc = c.ident();
        std::transform(cc.begin(), cc.end(), cc.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
        if (cc == "EQ") ins.cond = Cond::EQ;
        else if (cc == "NE") ins.cond = Cond::NE;
        else c.fail("condition EQ or NE");
      }
      ins.label = c.ident();
      break;
    case K::Stuck:
      break;  // no operands
    case K::MovReg:
    case K::BCond:
    case K::Label:
      break;  // produced above, never looked up
  }
  return ins;
}

void check_labels(const Thread& t) {
  for (const auto& ins : t.code) {
    if (ins.kind != Instruction::Kind::Cbz && ins.kind != Instruction::Kind::Cbnz &&
        ins.kind != Instruction::Kind::BCond && ins.kind != Instruction::Kind::B)
      continue;
    bool found = false;
    for (const auto& other : t.code)
      if (other.kind == Instruction::Kind::Label && other.label == ins.label) found = true;
    if (!found)
      throw Error(ErrorKind::UnresolvedLabel,
                  "branch target '" + ins.label + "' not defined in thread P" + std::to_string(t.id));
  }
}

}  // namespace

LitmusTest parse_asm_litmus(const std::string& text, ISA isa) {
  detail::Cursor c(text);
  LitmusTest test;
  test.dialect = Dialect::Asm;
  test.isa = isa;
  c.expect(isa == ISA::AArch64Sub ? "AArch64" : "ABS");
  test.name = c.ident();
  detail::parse_init_block(c, test);

  while (c.peek_is("P")) {
    // Thread label `P<k>` introducing a block; `exists`/`forall`/`locations`
    // terminate the thread list.
    std::string label = c.ident();
    int id = detail::parse_thread_label(label);
    if (id < 0) c.fail("thread label P<k>");
    Thread t;
    t.id = id;
    c.expect("{");
    while (!c.peek_is("}")) {
      std::string word = c.ident();
      if (c.try_consume(":")) {
        Instruction lab;
        lab.kind = Instruction::Kind::Label;
        lab.label = word;
        t.code.push_back(std::move(lab));
        continue;
      }
      t.code.push_back(parse_instruction(c, isa, word));
      c.try_consume(";");
    }
    c.expect("}");
    check_labels(t);
    test.threads.push_back(std::move(t));
  }
  if (test.threads.empty()) c.fail("at least one thread");

  detail::parse_tail_sections(c, test);

  test.metadata = c.metadata;
  detail::normalize_test(test);
  return test;
}

}  // namespace lct::litmus
