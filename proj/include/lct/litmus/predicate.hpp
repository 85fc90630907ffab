#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lct/litmus/value.hpp"

namespace lct::litmus {

// An observable named by a final-state predicate or outcome: a thread-local
// register or a shared location.
struct ObservableKey {
  enum class Kind { Reg, Mem };
  Kind kind = Kind::Mem;
  int thread = -1;   // Reg only
  std::string name;  // register or location name

  static ObservableKey reg(int thread, std::string name) {
    return ObservableKey{Kind::Reg, thread, std::move(name)};
  }
  static ObservableKey mem(std::string name) {
    return ObservableKey{Kind::Mem, -1, std::move(name)};
  }

  friend bool operator<(const ObservableKey& a, const ObservableKey& b) {
    if (a.kind != b.kind) return a.kind < b.kind;  // registers before memory
    if (a.thread != b.thread) return a.thread < b.thread;
    return a.name < b.name;
  }
  friend bool operator==(const ObservableKey& a, const ObservableKey& b) {
    return a.kind == b.kind && a.thread == b.thread && a.name == b.name;
  }

  std::string source_name() const;  // "1:r0" or "x"
  std::string asm_name() const;     // "P1_r0" or "x"
};

// Quantifier-free boolean combination of (observable = value) atoms.
struct PredNode;
using PredPtr = std::shared_ptr<const PredNode>;

struct PredNode {
  enum class Op { Atom, And, Or, Not, True };
  Op op = Op::True;
  ObservableKey obs;  // Atom
  int64_t value = 0;  // Atom: literal compared after width normalization
  PredPtr lhs, rhs;

  static PredPtr atom(ObservableKey k, int64_t v);
  static PredPtr conj(PredPtr a, PredPtr b);
  static PredPtr disj(PredPtr a, PredPtr b);
  static PredPtr negate(PredPtr a);
  static PredPtr truth();
};

struct FinalPredicate {
  enum class Mode { Exists, Forall };
  Mode mode = Mode::Exists;
  PredPtr body = PredNode::truth();
};

bool pred_equal(const PredPtr& a, const PredPtr& b);
std::vector<ObservableKey> pred_observables(const PredPtr& p);
bool eval_pred(const PredPtr& p, const std::map<ObservableKey, Value>& bind);

}  // namespace lct::litmus
