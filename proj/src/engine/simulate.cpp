#include "lct/engine/simulate.hpp"

#include <array>
#include <set>

#include "lct/engine/paths.hpp"
#include "lct/litmus/error.hpp"
#include "lct/models/eval.hpp"

namespace lct::engine {

namespace {

using litmus::LitmusTest;
using litmus::ObservableKey;
using litmus::Value;

Value register_value(const LitmusTest& test, const CandidateExecution& exec,
                     const ObservableKey& key) {
  auto it = exec.final_regs.find({key.thread, key.name});
  if (it != exec.final_regs.end()) return it->second;
  const litmus::Thread* t = test.thread(key.thread);
  litmus::RegisterInfo ri;
  if (t) {
    auto rit = t->registers.find(key.name);
    if (rit != t->registers.end()) ri = rit->second;
  }
  return Value::integer(0, ri.width, ri.is_signed);
}

Value memory_value(const LitmusTest& test, const CandidateExecution& exec,
                   const std::string& loc) {
  litmus::LocationInfo li;
  auto lit = test.init.locations.find(loc);
  if (lit != test.init.locations.end()) li = lit->second;
  auto cit = exec.co.find(loc);
  if (cit == exec.co.end() || cit->second.empty())
    return li.init.narrowed(li.width, li.is_signed);
  const Event& last = exec.events[cit->second.back()];
  return last.value.narrowed(li.width, li.is_signed);
}

void require_dialect(const LitmusTest& test, const models::ModelSpec& model) {
  using litmus::Dialect;
  bool ok = model.dialect == models::ModelDialect::Any ||
            (model.dialect == models::ModelDialect::Source && test.dialect == Dialect::Source) ||
            (model.dialect == models::ModelDialect::Asm && test.dialect == Dialect::Asm);
  if (!ok)
    throw Error(ErrorKind::DialectMismatch,
                "model '" + model.name + "' does not apply to this dialect");
}

}  // namespace

Outcome outcome_of(const LitmusTest& test, const CandidateExecution& exec) {
  Outcome o;
  for (const ObservableKey& key : test.observables()) {
    o.bind[key] = key.kind == ObservableKey::Kind::Reg ? register_value(test, exec, key)
                                                       : memory_value(test, exec, key.name);
  }
  return o;
}

OutcomeSet outcomes_of(const LitmusTest& test, const std::vector<CandidateExecution>& execs) {
  OutcomeSet set;
  for (const CandidateExecution& e : execs) {
    Outcome o = outcome_of(test, e);
    if (set.outcomes.insert(o).second) set.witnesses.emplace(o, e);
  }
  return set;
}

std::string render_outcome(const LitmusTest& test, const Outcome& o) {
  std::string line;
  for (const ObservableKey& key : test.observables()) {
    auto it = o.bind.find(key);
    if (it == o.bind.end()) continue;
    if (!line.empty()) line += " ";
    line += test.observable_name(key) + "=" + it->second.str() + ";";
  }
  return line;
}

SimulationResult simulate(const LitmusTest& test, const models::ModelSpec& model,
                          const SimOptions& opts) {
  require_dialect(test, model);
  auto start = std::chrono::steady_clock::now();

  LitmusTest unrolled = unroll(test, opts.unroll_factor);
  EnumOptions eopts;
  eopts.candidate_cap = opts.candidate_cap;
  eopts.deadline = start + opts.timeout;

  SimulationResult result;
  enumerate_candidates(unrolled, eopts, [&](const CandidateExecution& exec) {
    result.stats.candidates++;
    if (models::check_model(model, exec).allowed) {
      result.stats.allowed++;
      Outcome o = outcome_of(unrolled, exec);
      if (result.outcomes.outcomes.insert(o).second && opts.keep_witnesses)
        result.outcomes.witnesses.emplace(o, exec);
    }
    return true;
  });

  result.stats.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<std::pair<Event, Event>> detect_races(const LitmusTest& test,
                                                  const models::ModelSpec& model,
                                                  const SimOptions& opts) {
  require_dialect(test, model);
  if (test.dialect != litmus::Dialect::Source)
    throw Error(ErrorKind::DialectMismatch, "race detection applies to source tests");

  auto start = std::chrono::steady_clock::now();
  LitmusTest unrolled = unroll(test, opts.unroll_factor);
  EnumOptions eopts;
  eopts.candidate_cap = opts.candidate_cap;
  eopts.deadline = start + opts.timeout;

  // Dedup on origin so one racy statement pair reports once across
  // executions.
  std::set<std::array<int, 4>> seen;
  std::vector<std::pair<Event, Event>> races;

  enumerate_candidates(unrolled, eopts, [&](const CandidateExecution& exec) {
    if (!models::check_model(model, exec).allowed) return true;
    models::Relation hb = models::eval_relation(model.hb, exec);
    for (const Event& a : exec.events) {
      if (a.is_init || is_fence(a.kind)) continue;
      for (const Event& b : exec.events) {
        if (b.id <= a.id || b.is_init || is_fence(b.kind)) continue;
        bool conflict = a.loc == b.loc && (is_write(a.kind) || is_write(b.kind)) &&
                        (a.order == litmus::MemOrder::NA || b.order == litmus::MemOrder::NA);
        if (!conflict) continue;
        if (hb.at(a.id, b.id) || hb.at(b.id, a.id)) continue;
        std::array<int, 4> key{a.thread, a.origin_stmt, b.thread, b.origin_stmt};
        if (seen.insert(key).second) races.emplace_back(a, b);
      }
    }
    return true;
  });
  return races;
}

}  // namespace lct::engine
