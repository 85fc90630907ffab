#include <set>

#include "lct/litmus/parse.hpp"

namespace lct::litmus {
namespace {

void check_na_orders(const Block& body, std::vector<Diagnostic>& out) {
  for (const auto& s : body) {
    bool na_ok = s.kind == Statement::Kind::Load || s.kind == Statement::Kind::Store;
    bool has_order = s.kind == Statement::Kind::Load || s.kind == Statement::Kind::Store ||
                     s.kind == Statement::Kind::FetchAdd || s.kind == Statement::Kind::Exchange ||
                     s.kind == Statement::Kind::Fence;
    if (has_order && !na_ok && s.order == MemOrder::NA)
      out.push_back({"InvalidOrder", "NA order permitted only on loads and stores"});
    if (s.kind == Statement::Kind::If) {
      if (s.then_body) check_na_orders(*s.then_body, out);
      if (s.else_body) check_na_orders(*s.else_body, out);
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate_test(const LitmusTest& test) {
  std::vector<Diagnostic> out;

  for (size_t i = 0; i < test.threads.size(); ++i)
    if (test.threads[i].id != static_cast<int>(i))
      out.push_back({"NonContiguousThreads",
                     "thread ids must be contiguous P0..Pn-1; found P" +
                         std::to_string(test.threads[i].id) + " at position " + std::to_string(i)});
  if (test.threads.empty()) out.push_back({"NoThreads", "a test needs at least one thread"});

  for (const auto& dup : test.init.duplicates)
    out.push_back({"DuplicateInit", "location initialized more than once: " + dup});

  // Layout constraint cycle check (parsed facts only).
  {
    std::set<std::pair<std::string, std::string>> edges;
    for (const auto& [a, b, off] : test.init.layout) {
      (void)off;
      if (edges.count({b, a}) || a == b)
        out.push_back({"LayoutCycle", "layout constraints form a cycle over " + a + ", " + b});
      edges.insert({a, b});
    }
  }

  for (const auto& key : test.observables()) {
    if (key.kind == ObservableKey::Kind::Reg) {
      const Thread* t = test.thread(key.thread);
      if (!t)
        out.push_back({"UndeclaredObservable",
                       "final state names register of unknown thread: " + key.source_name()});
    } else if (!test.init.locations.count(key.name)) {
      out.push_back({"UndeclaredObservable",
                     "final state names location missing from init: " + key.name});
    }
  }

  for (const auto& t : test.threads) {
    if (test.dialect == Dialect::Source) {
      if (!t.code.empty())
        out.push_back({"DialectMixture", "source-dialect thread P" + std::to_string(t.id) +
                                             " carries instructions"});
      check_na_orders(t.body, out);
    } else if (!t.body.empty()) {
      out.push_back({"DialectMixture",
                     "asm-dialect thread P" + std::to_string(t.id) + " carries statements"});
    }
  }

  return out;
}

}  // namespace lct::litmus
