#include "lct/pipeline/disasm.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <optional>
#include <sstream>

#include "lct/litmus/error.hpp"

namespace lct::pipeline {

using litmus::AddrOperand;
using litmus::Cond;
using litmus::FenceKind;
using litmus::Instruction;
using litmus::MemOrder;
using litmus::Width;

namespace {

struct RawInstr {
  uint64_t offset = 0;
  std::string mnemonic;             // lowercase, as printed
  std::vector<std::string> operands;  // comma-split, trimmed
  std::string reloc_type;
  std::string reloc_symbol;
};

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool is_hex(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isxdigit(c);
  });
}

// "   4:\t90000009 \tadrp\tx9, 0 <P0>" -> (4, "adrp", "x9, 0 <P0>")
std::optional<RawInstr> parse_instr_line(const std::string& line) {
  size_t colon = line.find(':');
  if (colon == std::string::npos) return std::nullopt;
  std::string off = trim(line.substr(0, colon));
  if (!is_hex(off)) return std::nullopt;
  std::istringstream rest(line.substr(colon + 1));
  std::string encoding, mnemonic;
  rest >> encoding >> mnemonic;
  if (!is_hex(encoding) || mnemonic.empty()) return std::nullopt;
  std::string operands;
  std::getline(rest, operands);
  size_t comment = operands.find("//");
  if (comment != std::string::npos) operands = operands.substr(0, comment);
  RawInstr raw;
  raw.offset = std::strtoull(off.c_str(), nullptr, 16);
  raw.mnemonic = mnemonic;
  std::string cur;
  int depth = 0;  // '[' ... ']' groups contain commas only in pair forms we reject anyway
  for (char c : operands) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == ',' && depth == 0) {
      raw.operands.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) raw.operands.push_back(trim(cur));
  return raw;
}

// "\t\t\t4: R_AARCH64_ADR_PREL_PG_HI21\tx" -> (4, type, x)
std::optional<SymbolMap::Reloc> parse_reloc_line(const std::string& line) {
  std::string t = trim(line);
  size_t colon = t.find(':');
  if (colon == std::string::npos) return std::nullopt;
  std::string off = trim(t.substr(0, colon));
  if (!is_hex(off)) return std::nullopt;
  std::istringstream rest(t.substr(colon + 1));
  std::string type, symbol;
  rest >> type >> symbol;
  if (type.rfind("R_", 0) != 0 || symbol.empty()) return std::nullopt;
  // Strip addend suffixes like "x+0x4"; nonzero addends are not supported.
  size_t plus = symbol.find('+');
  if (plus != std::string::npos) {
    if (symbol.substr(plus) != "+0x0")
      throw Error(ErrorKind::UnmappedAddress,
                  "relocation with nonzero addend: " + symbol);
    symbol = symbol.substr(0, plus);
  }
  SymbolMap::Reloc r;
  r.offset = std::strtoull(off.c_str(), nullptr, 16);
  r.type = type;
  r.symbol = symbol;
  return r;
}

std::string upper_reg(const std::string& reg) {
  std::string r = reg;
  std::transform(r.begin(), r.end(), r.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return r;
}

bool is_reg_token(const std::string& t) {
  if (t.empty()) return false;
  char c = static_cast<char>(std::tolower(static_cast<unsigned char>(t[0])));
  if (c != 'w' && c != 'x') return false;
  std::string rest = t.substr(1);
  std::string low;
  for (char ch : rest) low += static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  if (low == "zr") return true;
  return is_hex(rest) && std::all_of(rest.begin(), rest.end(), [](unsigned char ch) {
           return std::isdigit(ch);
         });
}

int64_t parse_imm(const std::string& t, uint64_t off) {
  if (t.empty() || t[0] != '#')
    throw Error(ErrorKind::UnknownMnemonic,
                "expected immediate at offset 0x" + std::to_string(off));
  return std::strtoll(t.c_str() + 1, nullptr, 0);
}

// "[x9]" or "[x9, #0]"; other addressing modes are out of the subset.
std::string parse_base(const std::string& t, uint64_t off) {
  if (t.size() < 3 || t.front() != '[' || t.back() != ']')
    throw Error(ErrorKind::UnsupportedConstruct,
                "unsupported address operand '" + t + "' at offset 0x" + std::to_string(off));
  std::string inner = t.substr(1, t.size() - 2);
  size_t comma = inner.find(',');
  if (comma != std::string::npos) {
    std::string offpart = trim(inner.substr(comma + 1));
    if (offpart != "#0" && offpart != "#0x0")
      throw Error(ErrorKind::UnsupportedConstruct,
                  "non-relocated address offset '" + t + "' at offset 0x" + std::to_string(off));
    inner = trim(inner.substr(0, comma));
  }
  inner = trim(inner);
  if (!is_reg_token(inner))
    throw Error(ErrorKind::UnsupportedConstruct,
                "unsupported address base '" + inner + "' at offset 0x" + std::to_string(off));
  return upper_reg(inner);
}

// Branch target "14 <P0+0x14>" or "20 <P1>" -> offset
uint64_t parse_target(const std::string& t, uint64_t off) {
  std::istringstream ss(t);
  std::string hex;
  ss >> hex;
  if (!is_hex(hex))
    throw Error(ErrorKind::UnresolvedLabel,
                "cannot parse branch target '" + t + "' at offset 0x" + std::to_string(off));
  return std::strtoull(hex.c_str(), nullptr, 16);
}

// Mnemonic suffix split: family + a/l acquire-release flags + b/h width.
struct AtomicSuffix {
  bool acquire = false, release = false;
  std::optional<Width> width;
  bool ok = false;
};

AtomicSuffix split_suffix(const std::string& mnemonic, const std::string& family,
                          bool has_al_flags) {
  AtomicSuffix s;
  if (mnemonic.rfind(family, 0) != 0) return s;
  std::string rest = mnemonic.substr(family.size());
  if (has_al_flags) {
    if (!rest.empty() && rest[0] == 'a') {
      s.acquire = true;
      rest = rest.substr(1);
    }
    if (!rest.empty() && rest[0] == 'l') {
      s.release = true;
      rest = rest.substr(1);
    }
  }
  if (rest == "b")
    s.width = Width::B8;
  else if (rest == "h")
    s.width = Width::B16;
  else if (!rest.empty())
    return s;
  s.ok = true;
  return s;
}

struct FunctionBuilder {
  std::string name;
  std::vector<std::pair<uint64_t, Instruction>> body;  // offset-tagged
  std::vector<uint64_t> label_targets;
  uint64_t end_offset = 0;  // offset just past the last parsed line

  void require_operands(const RawInstr& raw, size_t n) const {
    if (raw.operands.size() != n)
      throw Error(ErrorKind::UnknownMnemonic,
                  "operand count for '" + raw.mnemonic + "' at offset 0x" +
                      std::to_string(raw.offset));
  }

  std::string label_name(uint64_t target) const {
    std::ostringstream ss;
    ss << "L" << std::hex << target;
    return ss.str();
  }

  void convert(const RawInstr& raw) {
    const std::string& m = raw.mnemonic;
    Instruction ins;
    auto push = [&] { body.emplace_back(raw.offset, std::move(ins)); };

    if (m == "ret" || m == "nop") return;
    if (m == "bl" || m == "blr")
      throw Error(ErrorKind::UnsupportedConstruct, "function calls are out of the subset");

    if (m == "mov" || m == "movz") {
      require_operands(raw, 2);
      ins.dst = upper_reg(raw.operands[0]);
      if (is_reg_token(raw.operands[1])) {
        ins.kind = Instruction::Kind::MovReg;
        ins.src = upper_reg(raw.operands[1]);
      } else {
        ins.kind = Instruction::Kind::MovImm;
        ins.imm = parse_imm(raw.operands[1], raw.offset);
      }
      push();
      return;
    }
    if (m == "adrp" || m == "adr") {
      require_operands(raw, 2);
      ins.kind = m == "adrp" ? Instruction::Kind::Adrp : Instruction::Kind::Adr;
      ins.dst = upper_reg(raw.operands[0]);
      if (!raw.reloc_symbol.empty())
        ins.sym = raw.reloc_symbol;
      else if (!raw.operands[1].empty() && !std::isdigit(static_cast<unsigned char>(raw.operands[1][0])))
        ins.sym = raw.operands[1];
      else
        throw Error(ErrorKind::UnmappedAddress,
                    m + " at offset 0x" + std::to_string(raw.offset) +
                        " has no relocation naming its target");
      push();
      return;
    }
    if (m == "add" || m == "eor" || m == "subs") {
      require_operands(raw, 3);
      ins.kind = m == "add"   ? Instruction::Kind::Add
                 : m == "eor" ? Instruction::Kind::Eor
                              : Instruction::Kind::Subs;
      ins.dst = upper_reg(raw.operands[0]);
      ins.src = upper_reg(raw.operands[1]);
      if (m == "add" && raw.reloc_type == "R_AARCH64_ADD_ABS_LO12_NC") {
        ins.sym = raw.reloc_symbol;
      } else if (is_reg_token(raw.operands[2])) {
        ins.src2 = upper_reg(raw.operands[2]);
      } else {
        ins.imm = parse_imm(raw.operands[2], raw.offset);
      }
      push();
      return;
    }
    if (m == "cmp") {
      require_operands(raw, 2);
      ins.kind = Instruction::Kind::Subs;
      ins.src = upper_reg(raw.operands[0]);
      ins.dst = ins.src[0] == 'X' ? "XZR" : "WZR";
      if (is_reg_token(raw.operands[1]))
        ins.src2 = upper_reg(raw.operands[1]);
      else
        ins.imm = parse_imm(raw.operands[1], raw.offset);
      push();
      return;
    }
    if (m == "cbz" || m == "cbnz") {
      require_operands(raw, 2);
      ins.kind = m == "cbz" ? Instruction::Kind::Cbz : Instruction::Kind::Cbnz;
      ins.src = upper_reg(raw.operands[0]);
      uint64_t target = parse_target(raw.operands[1], raw.offset);
      ins.label = label_name(target);
      label_targets.push_back(target);
      push();
      return;
    }
    if (m == "b.eq" || m == "b.ne") {
      require_operands(raw, 1);
      ins.kind = Instruction::Kind::BCond;
      ins.cond = m == "b.eq" ? Cond::EQ : Cond::NE;
      uint64_t target = parse_target(raw.operands[0], raw.offset);
      ins.label = label_name(target);
      label_targets.push_back(target);
      push();
      return;
    }
    if (m == "b") {
      require_operands(raw, 1);
      ins.kind = Instruction::Kind::B;
      uint64_t target = parse_target(raw.operands[0], raw.offset);
      ins.label = label_name(target);
      label_targets.push_back(target);
      push();
      return;
    }
    if (m == "dmb") {
      require_operands(raw, 1);
      ins.kind = Instruction::Kind::Dmb;
      const std::string& dom = raw.operands[0];
      if (dom == "ish" || dom == "sy")
        ins.fence = FenceKind::Full;
      else if (dom == "ishld" || dom == "ld")
        ins.fence = FenceKind::Ld;
      else if (dom == "ishst" || dom == "st")
        ins.fence = FenceKind::St;
      else
        throw Error(ErrorKind::UnknownMnemonic, "dmb domain '" + dom + "'");
      push();
      return;
    }

    auto addr_of = [&](const std::string& tok) {
      AddrOperand a;
      a.base = parse_base(tok, raw.offset);
      if (raw.reloc_type.rfind("R_AARCH64_LDST", 0) == 0) {
        a.form = AddrOperand::Form::RegLo12;
        a.sym = raw.reloc_symbol;
      } else {
        a.form = AddrOperand::Form::Reg;
      }
      return a;
    };

    if (auto s = split_suffix(m, "ldapr", false); s.ok) {
      require_operands(raw, 2);
      ins.kind = Instruction::Kind::Load;
      ins.order = MemOrder::AcqPC;
      ins.dst = upper_reg(raw.operands[0]);
      ins.addr = addr_of(raw.operands[1]);
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "ldar", false); s.ok) {
      require_operands(raw, 2);
      ins.kind = Instruction::Kind::Load;
      ins.order = MemOrder::Acq;
      ins.dst = upper_reg(raw.operands[0]);
      ins.addr = addr_of(raw.operands[1]);
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "ldr", false); s.ok) {
      require_operands(raw, 2);
      ins.kind = Instruction::Kind::Load;
      ins.order = MemOrder::Rlx;
      ins.dst = upper_reg(raw.operands[0]);
      ins.addr = addr_of(raw.operands[1]);
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "stlr", false); s.ok) {
      require_operands(raw, 2);
      ins.kind = Instruction::Kind::Store;
      ins.order = MemOrder::Rel;
      ins.src = upper_reg(raw.operands[0]);
      ins.addr = addr_of(raw.operands[1]);
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "str", false); s.ok) {
      require_operands(raw, 2);
      ins.kind = Instruction::Kind::Store;
      ins.order = MemOrder::Rlx;
      ins.src = upper_reg(raw.operands[0]);
      ins.addr = addr_of(raw.operands[1]);
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "stadd", true); s.ok && !s.acquire) {
      require_operands(raw, 2);
      ins.kind = Instruction::Kind::LdAdd;
      ins.src = upper_reg(raw.operands[0]);
      ins.addr = addr_of(raw.operands[1]);
      ins.order = MemOrder::Rlx;
      ins.order2 = s.release ? MemOrder::Rel : MemOrder::Rlx;
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "ldadd", true); s.ok) {
      require_operands(raw, 3);
      ins.kind = Instruction::Kind::LdAdd;
      ins.src = upper_reg(raw.operands[0]);
      ins.dst = upper_reg(raw.operands[1]);
      if (litmus::is_zero_register(ins.dst)) ins.dst.clear();  // STADD alias
      ins.addr = addr_of(raw.operands[2]);
      ins.order = s.acquire && !ins.dst.empty() ? MemOrder::Acq : MemOrder::Rlx;
      ins.order2 = s.release ? MemOrder::Rel : MemOrder::Rlx;
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "swp", true); s.ok) {
      require_operands(raw, 3);
      ins.kind = Instruction::Kind::Swp;
      ins.src = upper_reg(raw.operands[0]);
      ins.dst = upper_reg(raw.operands[1]);
      ins.addr = addr_of(raw.operands[2]);
      ins.order = s.acquire ? MemOrder::Acq : MemOrder::Rlx;
      ins.order2 = s.release ? MemOrder::Rel : MemOrder::Rlx;
      ins.width_suffix = s.width;
      push();
      return;
    }
    if (auto s = split_suffix(m, "cas", true); s.ok) {
      require_operands(raw, 3);
      ins.kind = Instruction::Kind::Cas;
      ins.dst = upper_reg(raw.operands[0]);
      ins.src = upper_reg(raw.operands[1]);
      ins.addr = addr_of(raw.operands[2]);
      ins.order = s.acquire ? MemOrder::Acq : MemOrder::Rlx;
      ins.order2 = s.release ? MemOrder::Rel : MemOrder::Rlx;
      ins.width_suffix = s.width;
      push();
      return;
    }

    throw Error(ErrorKind::UnknownMnemonic,
                "unsupported mnemonic '" + m + "' at offset 0x" + std::to_string(raw.offset));
  }

  std::vector<Instruction> finish() {
    std::vector<Instruction> out;
    std::map<uint64_t, bool> targets;
    for (uint64_t t : label_targets) {
      bool in_range = t == end_offset ||
                      std::any_of(body.begin(), body.end(),
                                  [&](const auto& p) { return p.first == t; });
      if (!in_range)
        throw Error(ErrorKind::UnsupportedConstruct,
                    "branch leaves function " + name);
      targets[t] = true;
    }
    for (const auto& [off, ins] : body) {
      if (targets.count(off)) {
        Instruction lab;
        lab.kind = Instruction::Kind::Label;
        lab.label = label_name(off);
        out.push_back(lab);
      }
      out.push_back(ins);
    }
    if (targets.count(end_offset)) {
      Instruction lab;
      lab.kind = Instruction::Kind::Label;
      lab.label = label_name(end_offset);
      out.push_back(lab);
    }
    return out;
  }
};

}  // namespace

ParsedDisasm parse_objdump(const std::string& text) {
  ParsedDisasm result;
  std::istringstream in(text);
  std::string line;
  std::optional<FunctionBuilder> current;
  std::vector<RawInstr> raws;

  auto flush = [&] {
    if (!current) return;
    for (const auto& raw : raws) current->convert(raw);
    result.functions.emplace_back(current->name, current->finish());
    current.reset();
    raws.clear();
  };

  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty()) continue;
    // "0000000000000020 <P1>:"
    if (t.back() == ':' && t.find('<') != std::string::npos) {
      size_t lt = t.find('<'), gt = t.find('>');
      std::string off = trim(t.substr(0, lt));
      if (gt != std::string::npos && gt > lt && is_hex(off)) {
        std::string name = t.substr(lt + 1, gt - lt - 1);
        // $x/$d mapping symbols are markers inside a function, not functions.
        if (!name.empty() && name[0] == '$') continue;
        flush();
        current = FunctionBuilder{};
        current->name = name;
        continue;
      }
    }
    if (!current) continue;  // section headers, file format banner
    if (auto reloc = parse_reloc_line(line)) {
      if (raws.empty() || raws.back().offset != reloc->offset)
        throw Error(ErrorKind::UnmappedAddress,
                    "relocation at 0x" + std::to_string(reloc->offset) +
                        " does not follow its instruction");
      if (!raws.back().reloc_type.empty())
        throw Error(ErrorKind::DisassembleFailed,
                    "conflicting relocations at offset 0x" + std::to_string(reloc->offset));
      raws.back().reloc_type = reloc->type;
      raws.back().reloc_symbol = reloc->symbol;
      SymbolMap::Reloc rec = *reloc;
      rec.function = current->name;
      result.symbols.relocs.push_back(rec);
      result.symbols.by_offset[{current->name, reloc->offset}] = reloc->symbol;
      continue;
    }
    if (auto raw = parse_instr_line(line)) {
      raws.push_back(*raw);
      current->end_offset = raw->offset + 4;  // fixed-width ISA
      continue;
    }
  }
  flush();

  if (result.functions.empty())
    throw Error(ErrorKind::DisassembleFailed, "no disassembled functions found");
  return result;
}

}  // namespace lct::pipeline
