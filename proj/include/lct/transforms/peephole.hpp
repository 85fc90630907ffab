#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lct/litmus/test.hpp"

namespace lct::transforms {

// Rule selection for optimize_asm. Rules only fire when their guards prove
// the rewrite thread-local, so disabling one never changes semantics, only
// how much addressing boilerplate survives.
struct PeepholeOptions {
  bool collapse_pool_load = true;   // "pool-load": ADRP+LDR of a private pointer slot -> ADR
  bool fold_known_address = true;   // "fold-address": [Xn] with statically known address -> [sym]
  bool drop_dead_moves = true;      // "dead-move": unread ADR/ADRP/MOV/ADD/EOR removal
};

struct OptStats {
  int events_before = 0;       // memory-access instructions across all threads
  int events_after = 0;
  int instructions_before = 0;
  int instructions_after = 0;
  std::map<std::string, int> rules_fired;
  std::vector<std::string> guard_violations;  // matched but unsafe; skipped
};

// Rewrite assembly addressing into direct symbolic form where provably safe.
// Runs the enabled rules to a fixpoint. Never introduces instructions and
// never fires on shared or observable state, so the outcome set under any
// model is preserved while the candidate space shrinks. Asm dialect only.
std::pair<litmus::LitmusTest, OptStats> optimize_asm(const litmus::LitmusTest& test,
                                                     const PeepholeOptions& opts = {});

// Parse a comma-separated rule list ("pool-load,dead-move") into options with
// exactly those rules enabled. Throws BadConfig on an unknown rule name.
PeepholeOptions parse_rule_list(const std::string& rules);

}  // namespace lct::transforms
