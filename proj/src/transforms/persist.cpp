#include "lct/transforms/persist.hpp"

#include <algorithm>

#include "lct/litmus/error.hpp"

namespace lct::transforms {

using litmus::Dialect;
using lct::Error;
using lct::ErrorKind;
using litmus::Expr;
using litmus::LitmusTest;
using litmus::LocationInfo;
using litmus::ObservableKey;
using litmus::RegisterInfo;
using litmus::Statement;
using litmus::Value;

namespace {

// A fresh global must not collide with any name already used as a location:
// initialized, referenced by a body access, or observed.
bool names_location(const LitmusTest& test, const std::string& name) {
  if (test.init.locations.count(name)) return true;
  for (const auto& key : test.observables())
    if (key.kind == ObservableKey::Kind::Mem && key.name == name) return true;
  struct Scan {
    const std::string& name;
    bool found = false;
    void block(const litmus::Block& b) {
      for (const auto& s : b) {
        if (!s.loc.empty() && s.loc == name) found = true;
        if (s.then_body) block(*s.then_body);
        if (s.else_body) block(*s.else_body);
      }
    }
  } scan{name};
  for (const auto& t : test.threads) scan.block(t.body);
  return scan.found;
}

}  // namespace

PersistencePlan PersistencePlan::auto_for(const LitmusTest& test, const std::string& prefix) {
  PersistencePlan plan;
  plan.prefix = prefix;
  for (const auto& t : test.threads) {
    for (const auto& [reg, info] : t.registers)
      plan.per_thread[t.id].emplace_back(reg, prefix + std::to_string(t.id) + "_" + reg);
  }
  return plan;
}

LitmusTest persist_locals(const LitmusTest& test, const PersistencePlan& plan) {
  if (test.dialect != Dialect::Source)
    throw Error(ErrorKind::DialectMismatch, "persist-locals applies to source tests only");
  LitmusTest out = test;
  for (const auto& [tid, pairs] : plan.per_thread) {
    bool known = std::any_of(out.threads.begin(), out.threads.end(),
                             [tid = tid](const auto& t) { return t.id == tid; });
    if (!known)
      throw Error(ErrorKind::BadConfig,
                  "persist-locals plan names unknown thread " + std::to_string(tid));
    for (auto& t : out.threads) {
      if (t.id != tid) continue;
      for (const auto& [reg, global] : pairs) {
        if (names_location(out, global))
          throw Error(ErrorKind::NameCollision,
                      "persist-locals global '" + global + "' already names a location");
        // Unknown registers follow the zero-read convention: declare them.
        auto [it, inserted] = t.registers.try_emplace(reg, RegisterInfo{});
        const RegisterInfo& info = it->second;
        (void)inserted;
        Statement store;
        store.kind = Statement::Kind::Store;
        store.loc = global;
        store.value = Expr::regref(reg);
        store.order = litmus::MemOrder::NA;
        t.body.push_back(std::move(store));
        out.init.locations[global] =
            LocationInfo{Value::integer(0, info.width, info.is_signed), info.width, info.is_signed};
        ObservableKey key = ObservableKey::mem(global);
        if (std::find(out.locations.begin(), out.locations.end(), key) == out.locations.end())
          out.locations.push_back(key);
      }
    }
  }
  return out;
}

}  // namespace lct::transforms
