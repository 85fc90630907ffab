#pragma once

#include "lct/diffcheck/mapping.hpp"

namespace lct::diffcheck {

// Outcome-set comparison: a compiled test is correct when its outcomes,
// mapped to source names, form a subset of the source outcomes.
struct DiffReport {
  enum class Classification { Equal, Positive, Negative, Mixed };
  // Positive iff novel outcomes exist; Negative iff only missing ones;
  // Mixed is reserved and never emitted.
  Classification classification = Classification::Equal;

  std::set<engine::Outcome> novel;    // target-only, in source names
  std::set<engine::Outcome> missing;  // source-only
  std::set<engine::Outcome> source;   // full source set
  std::set<engine::Outcome> mapped_target;
  std::vector<std::string> warnings;  // dropped bindings

  // Race gating: comparison skipped because the source test is racy and the
  // policy says racy sources prove nothing.
  bool ub_filtered = false;
  bool target_asm_names = false;  // render right column with asm names
};

enum class RacePolicy { IgnoreRacy, CompareAnyway };

DiffReport compare_outcomes(const engine::OutcomeSet& src_out,
                            const engine::OutcomeSet& tgt_out, const StateMapping& m,
                            bool target_asm_names = true);

// Two-column table, source outcomes left, mapped target outcomes right,
// novel rows prefixed "+", deterministic order.
std::string render_compare_table(const DiffReport& report);

std::string classification_name(DiffReport::Classification c);

}  // namespace lct::diffcheck
