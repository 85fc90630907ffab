#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lct/litmus/asm.hpp"
#include "lct/litmus/predicate.hpp"
#include "lct/litmus/source.hpp"
#include "lct/litmus/value.hpp"

namespace lct::litmus {

enum class Dialect { Source, Asm };
enum class ISA { AArch64Sub, AbstractISA };

struct LocationInfo {
  Value init;  // explicit after parse; zero-default applied
  Width width = Width::B32;
  bool is_signed = true;
};

struct InitState {
  // Shared-memory initial values, keyed by location name.
  std::map<std::string, LocationInfo> locations;
  // Thread-register initial bindings (asm dialect): (thread, reg) -> value.
  std::map<std::pair<int, std::string>, Value> registers;
  // (a, b, byte offset) contiguity facts; parsed and round-tripped only.
  std::vector<std::tuple<std::string, std::string, int64_t>> layout;
  // Locations assigned more than once; surfaced by validate_test.
  std::vector<std::string> duplicates;
};

struct RegisterInfo {
  Width width = Width::B32;
  bool is_signed = true;
};

struct Thread {
  int id = 0;
  Block body;                           // Source dialect
  std::vector<Instruction> code;        // Asm dialect
  std::map<std::string, RegisterInfo> registers;
};

struct LitmusTest {
  std::string name;
  Dialect dialect = Dialect::Source;
  ISA isa = ISA::AArch64Sub;
  InitState init;
  std::vector<Thread> threads;
  FinalPredicate final_pred;
  std::vector<ObservableKey> locations;      // extra observables to report
  std::map<std::string, std::string> metadata;

  const Thread* thread(int id) const {
    for (const auto& t : threads)
      if (t.id == id) return &t;
    return nullptr;
  }

  // Observables an outcome binds: final-predicate names, `locations` entries,
  // deduplicated and ordered.
  std::vector<ObservableKey> observables() const;

  std::string observable_name(const ObservableKey& k) const {
    return dialect == Dialect::Source ? k.source_name() : k.asm_name();
  }
};

struct Diagnostic {
  std::string code;  // "UndeclaredObservable", "DuplicateInit", ...
  std::string message;
};

bool test_equal(const LitmusTest& a, const LitmusTest& b);

}  // namespace lct::litmus
