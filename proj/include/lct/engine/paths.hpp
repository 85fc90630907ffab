#pragma once

#include <map>
#include <string>
#include <vector>

#include "lct/engine/symexpr.hpp"
#include "lct/litmus/test.hpp"

namespace lct::engine {

// One symbolic memory access or fence on a thread path. Reads are numbered
// by per-path slots; every symbolic expression refers to those slots.
struct PathAccess {
  enum class Kind { Read, Write, Fence };
  Kind kind = Kind::Read;

  std::string loc;   // concrete location; empty when the address is symbolic
  SymPtr addr;       // symbolic address, used when loc is empty
  SymPtr value;      // Write: value expression
  int read_slot = -1;

  litmus::Width width = litmus::Width::B32;
  bool is_signed = true;
  litmus::MemOrder order = litmus::MemOrder::NA;
  litmus::FenceKind fence = litmus::FenceKind::None;

  bool is_rmw_read = false, is_rmw_write = false;
  int rmw_pair = -1;  // partner index within the same path

  int origin_stmt = -1;
  int origin_iter = 0;

  // Syntactic dependencies, as read slots (asm dialect only).
  std::vector<int> addr_deps, data_deps, ctrl_deps;
};

struct ThreadPath {
  int thread = 0;
  int choice_index = 0;
  std::vector<PathAccess> accesses;
  // (expr, expected truth value): the path is taken iff every expression's
  // nonzero-ness matches.
  std::vector<std::pair<SymPtr, bool>> constraints;
  std::map<std::string, SymPtr> final_regs;
  bool stuck = false;  // ran into an unroll residue; contributes no outcomes
};

// All feasible branch-decision paths of one thread. Requires unrolled code
// for the asm dialect (no backward branches).
std::vector<ThreadPath> thread_paths(const litmus::LitmusTest& test,
                                     const litmus::Thread& thread);

// Replace backward branches by `factor` copies of the loop body; residual
// iterations hit a Stuck marker. Straight-line and source tests are returned
// unchanged. factor >= 1.
litmus::LitmusTest unroll(const litmus::LitmusTest& test, int factor);

}  // namespace lct::engine
