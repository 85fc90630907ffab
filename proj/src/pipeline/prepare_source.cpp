#include "lct/pipeline/prepare_source.hpp"

#include <map>
#include <sstream>

#include "lct/litmus/error.hpp"

namespace lct::pipeline {

using litmus::Block;
using litmus::LitmusTest;
using litmus::MemOrder;
using litmus::Statement;
using litmus::Width;

namespace {

std::string c_type(Width w, bool is_signed) {
  std::string t = (is_signed ? "int" : "uint");
  t += std::to_string(static_cast<int>(w));
  return t + "_t";
}

std::string order_arg(MemOrder o) {
  if (o == MemOrder::NA || o == MemOrder::AcqPC)
    throw Error(ErrorKind::UnsupportedConstruct,
                "ordering has no C11 spelling: " + litmus::order_name(o));
  return litmus::order_c11_name(o);
}

enum class LocUse { None = 0, Atomic = 1, Plain = 2, Mixed = 3 };

void mark(std::map<std::string, int>& uses, const std::string& loc, MemOrder o) {
  uses[loc] |= (o == MemOrder::NA) ? static_cast<int>(LocUse::Plain)
                                   : static_cast<int>(LocUse::Atomic);
}

void scan_block(const Block& b, std::map<std::string, int>& uses) {
  for (const auto& s : b) {
    if (!s.loc.empty()) mark(uses, s.loc, s.order);
    if (s.then_body) scan_block(*s.then_body, uses);
    if (s.else_body) scan_block(*s.else_body, uses);
  }
}

struct Emitter {
  const LitmusTest& test;
  std::ostringstream& out;

  void statement(const Statement& s, int depth) {
    std::string pad(static_cast<size_t>(depth) * 2, ' ');
    switch (s.kind) {
      case Statement::Kind::Store:
        if (s.order == MemOrder::NA)
          out << pad << s.loc << " = " << litmus::render_expr(s.value) << ";\n";
        else
          out << pad << "atomic_store_explicit(&" << s.loc << ", "
              << litmus::render_expr(s.value) << ", " << order_arg(s.order) << ");\n";
        break;
      case Statement::Kind::Load:
        if (s.order == MemOrder::NA)
          out << pad << s.reg << " = " << s.loc << ";\n";
        else
          out << pad << s.reg << " = atomic_load_explicit(&" << s.loc << ", "
              << order_arg(s.order) << ");\n";
        break;
      case Statement::Kind::FetchAdd:
        out << pad << s.reg << " = atomic_fetch_add_explicit(&" << s.loc << ", "
            << litmus::render_expr(s.value) << ", " << order_arg(s.order) << ");\n";
        break;
      case Statement::Kind::Exchange:
        out << pad << s.reg << " = atomic_exchange_explicit(&" << s.loc << ", "
            << litmus::render_expr(s.value) << ", " << order_arg(s.order) << ");\n";
        break;
      case Statement::Kind::Fence:
        out << pad << "atomic_thread_fence(" << order_arg(s.order) << ");\n";
        break;
      case Statement::Kind::Assign:
        out << pad << s.reg << " = " << litmus::render_expr(s.value) << ";\n";
        break;
      case Statement::Kind::If:
        out << pad << "if (" << litmus::render_expr(s.cond) << ") {\n";
        for (const auto& inner : *s.then_body) statement(inner, depth + 1);
        if (s.else_body) {
          out << pad << "} else {\n";
          for (const auto& inner : *s.else_body) statement(inner, depth + 1);
        }
        out << pad << "}\n";
        break;
    }
  }
};

}  // namespace

std::string prepare_source(const LitmusTest& test) {
  if (test.dialect != litmus::Dialect::Source)
    throw Error(ErrorKind::DialectMismatch, "prepare_source needs a source-dialect test");
  if (test.threads.empty())
    throw Error(ErrorKind::UnsupportedConstruct, "test has no threads");

  std::map<std::string, int> uses;
  for (const auto& t : test.threads) scan_block(t.body, uses);
  for (const auto& [loc, use] : uses)
    if (use == static_cast<int>(LocUse::Mixed))
      throw Error(ErrorKind::UnsupportedConstruct,
                  "location '" + loc + "' mixes atomic and non-atomic accesses");

  std::ostringstream out;
  out << "// " << test.name << ": litmus translation unit\n";
  out << "// observables:";
  for (const auto& k : test.observables()) out << " " << k.source_name();
  out << "\n#include <stdatomic.h>\n#include <stdint.h>\n\n";

  for (const auto& [loc, info] : test.init.locations) {
    bool plain = uses.count(loc) && uses[loc] == static_cast<int>(LocUse::Plain);
    out << "extern " << (plain ? "volatile " : "_Atomic ")
        << c_type(info.width, info.is_signed) << " " << loc << ";\n";
  }
  out << "\n";

  Emitter em{test, out};
  for (const auto& t : test.threads) {
    out << "void P" << t.id << "(void) {\n";
    for (const auto& [reg, info] : t.registers)
      out << "  " << c_type(info.width, info.is_signed) << " " << reg << " = 0;\n";
    for (const auto& s : t.body) em.statement(s, 1);
    for (const auto& [reg, info] : t.registers) out << "  (void)" << reg << ";\n";
    out << "}\n\n";
  }
  return out.str();
}

}  // namespace lct::pipeline
