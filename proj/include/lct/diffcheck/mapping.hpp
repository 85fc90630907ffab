#pragma once

#include <set>
#include <string>
#include <vector>

#include "lct/engine/outcome.hpp"
#include "lct/litmus/test.hpp"

namespace lct::diffcheck {

// One matched observable pair with the declared formats on both sides;
// mapped values are renormalized to the source format.
struct MappedPair {
  litmus::ObservableKey src, tgt;
  litmus::Width src_width = litmus::Width::B32;
  bool src_signed = true;
  litmus::Width tgt_width = litmus::Width::B32;
  bool tgt_signed = true;
};

struct StateMapping {
  std::vector<MappedPair> pairs;  // sorted by source key; injective
  std::set<litmus::ObservableKey> unmapped_source;
  std::set<litmus::ObservableKey> unmapped_target;

  const MappedPair* by_target(const litmus::ObservableKey& k) const;
  StateMapping inverse() const;
};

// Match observables of src and tgt: explicit hints (rendered names, source →
// target) take precedence, then structural identity (thread/register and
// memory names; "1:r0" and "P1_r0" are the same key rendered per dialect).
// Throws AmbiguousMapping when hints are not injective.
StateMapping infer_state_mapping(
    const litmus::LitmusTest& src, const litmus::LitmusTest& tgt,
    const std::vector<std::pair<std::string, std::string>>& hints = {});

// Rename a target outcome to source names, normalizing each value to the
// source format. Unmapped target bindings are dropped with a warning.
// Throws MissingBinding when a mapped target name is absent.
engine::Outcome apply_mapping(const StateMapping& m, const engine::Outcome& o,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace lct::diffcheck
