#pragma once

#include <map>
#include <string>
#include <vector>

#include "lct/litmus/order.hpp"
#include "lct/litmus/value.hpp"
#include "lct/models/relation.hpp"

namespace lct::engine {

enum class EventKind { R, W, F, RmwR, RmwW };

inline bool is_read(EventKind k) { return k == EventKind::R || k == EventKind::RmwR; }
inline bool is_write(EventKind k) { return k == EventKind::W || k == EventKind::RmwW; }
inline bool is_fence(EventKind k) { return k == EventKind::F; }

struct Event {
  int id = -1;
  int thread = -1;  // -1 for init writes
  int po_index = -1;
  EventKind kind = EventKind::W;
  std::string loc;  // empty for fences
  litmus::Value value;
  litmus::MemOrder order = litmus::MemOrder::NA;
  litmus::FenceKind fence = litmus::FenceKind::None;
  bool is_init = false;
  int rmw_pair = -1;  // id of the other RMW half
  int origin_stmt = -1;
  int origin_iter = 0;
};

// One candidate execution: grounded events plus the po/rf/co choices that
// produced them. fr is always derived, never stored.
struct CandidateExecution {
  std::vector<Event> events;
  // Per event: id of the rf-source write; -1 for non-reads.
  std::vector<int> rf_src;
  // Per location: write event ids in coherence order, init write first.
  std::map<std::string, std::vector<int>> co;
  // Per thread: index of the chosen path in thread_paths order.
  std::vector<int> path_choices;
  // Final register values at thread exit.
  std::map<std::pair<int, std::string>, litmus::Value> final_regs;
  // Syntactic dependency edges (asm dialect): read event -> dependent event.
  std::vector<std::pair<int, int>> addr_dep, data_dep, ctrl_dep;

  std::vector<int> init_writes() const;
};

models::Relation derive_fr(const CandidateExecution& exec);

}  // namespace lct::engine
