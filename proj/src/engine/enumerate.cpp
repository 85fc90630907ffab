#include "lct/engine/enumerate.hpp"

#include <algorithm>

#include "lct/engine/paths.hpp"
#include "lct/litmus/error.hpp"
#include "paths_internal.hpp"

namespace lct::engine {

namespace {

using litmus::LitmusTest;
using litmus::Value;

// Enumeration state for one per-thread path selection. rf is assigned read by
// read in event-id order; values, locations and path constraints ground as rf
// grows, and a candidate survives only if everything grounds at the leaf.
// Pruning is deliberately limited to two sound rules (a read never takes its
// value from a po-later write of its own thread; known locations must match),
// so symbolic addresses defer all other rejection to the leaf.
struct Enumerator {
  const LitmusTest& test;
  const EnumOptions& opts;
  const std::function<bool(const CandidateExecution&)>& yield;

  std::vector<Event> events{};                     // values filled at the leaf
  std::vector<const PathAccess*> access_of{};      // per event; null for init
  std::vector<int> thread_pos_of{};                // per event; -1 for init
  std::vector<int> reads{};                        // read event ids, id order
  std::vector<int> writes{};                       // write event ids, id order
  std::vector<int> rf{};                           // per event; -1 unassigned
  std::map<std::pair<int, int>, int> slot_event{}; // (thread pos, slot) -> read id
  std::vector<const ThreadPath*> chosen{};         // per thread pos
  std::vector<std::pair<int, int>> rmw_pairs{};    // (read id, write id)

  uint64_t& yielded;
  uint64_t node_counter = 0;
  bool stop = false;

  // Grounding walks rf backwards; `visiting` breaks value cycles, which
  // discards out-of-thin-air assignments.
  std::optional<Value> ground_event(int id, std::vector<bool>& visiting) const {
    const Event& e = events[id];
    if (e.is_init) return e.value;
    if (visiting[id]) return std::nullopt;
    visiting[id] = true;
    std::optional<Value> result;
    const PathAccess* pa = access_of[id];
    if (is_read(e.kind)) {
      if (rf[id] >= 0) {
        if (auto v = ground_event(rf[id], visiting))
          result = v->narrowed(pa->width, pa->is_signed);
      }
    } else {
      result = eval_sym(pa->value, thread_pos_of[id], visiting);
    }
    visiting[id] = false;
    return result;
  }

  std::optional<Value> eval_sym(const SymPtr& e, int thread_pos,
                                std::vector<bool>& visiting) const {
    return sym_eval(e, [&](int slot) -> std::optional<Value> {
      auto it = slot_event.find({thread_pos, slot});
      if (it == slot_event.end()) return std::nullopt;
      return ground_event(it->second, visiting);
    });
  }

  std::optional<Value> ground(int id) const {
    std::vector<bool> visiting(events.size(), false);
    return ground_event(id, visiting);
  }

  // Concrete location of a memory event under the current partial rf;
  // nullopt while the address is still symbolic.
  std::optional<std::string> loc_of(int id) const {
    const Event& e = events[id];
    if (e.is_init) return e.loc;
    const PathAccess* pa = access_of[id];
    if (!pa->loc.empty()) return pa->loc;
    if (!pa->addr) return std::nullopt;
    std::vector<bool> visiting(events.size(), false);
    auto v = eval_sym(pa->addr, thread_pos_of[id], visiting);
    if (v && v->is_address()) return *v->addr;
    return std::nullopt;
  }

  // A constraint or rf-location conflict that already grounds to a
  // contradiction prunes the whole subtree.
  bool consistent() const {
    for (size_t tp = 0; tp < chosen.size(); ++tp) {
      for (const auto& [expr, want] : chosen[tp]->constraints) {
        std::vector<bool> visiting(events.size(), false);
        if (auto v = eval_sym(expr, static_cast<int>(tp), visiting))
          if ((v->canonical() != 0) != want) return false;
      }
    }
    for (int r : reads) {
      if (rf[r] < 0) continue;
      auto lr = loc_of(r);
      auto lw = loc_of(rf[r]);
      if (lr && lw && *lr != *lw) return false;
    }
    return true;
  }

  void poll_deadline() {
    if (++node_counter % 1024 != 0 || !opts.deadline) return;
    if (std::chrono::steady_clock::now() > *opts.deadline)
      throw Error(ErrorKind::Timeout, "candidate enumeration exceeded the time budget");
  }

  void assign_reads(size_t read_ix) {
    if (stop) return;
    poll_deadline();
    if (read_ix == reads.size()) {
      leaf();
      return;
    }
    int r = reads[read_ix];
    auto lr = loc_of(r);
    for (int w : writes) {
      const Event& we = events[w];
      if (we.thread == events[r].thread && we.po_index > events[r].po_index) continue;
      if (lr) {
        auto lw = loc_of(w);
        if (lw && *lw != *lr) continue;
      }
      rf[r] = w;
      if (consistent()) assign_reads(read_ix + 1);
      rf[r] = -1;
      if (stop) return;
    }
  }

  // Full rf assignment: require everything to ground, then enumerate co.
  void leaf() {
    std::vector<std::string> locs_by_id(events.size());
    for (const Event& e : events) {
      if (is_fence(e.kind)) continue;
      auto l = loc_of(e.id);
      if (!l) return;
      locs_by_id[e.id] = *l;
    }
    std::vector<Value> value_of(events.size());
    std::map<std::string, std::vector<int>> by_loc;  // non-init writes per loc
    for (const Event& e : events) {
      if (is_fence(e.kind)) continue;
      auto v = ground(e.id);
      if (!v) return;
      value_of[e.id] = *v;
      if (is_read(e.kind) && locs_by_id[rf[e.id]] != locs_by_id[e.id]) return;
      if (is_write(e.kind) && !e.is_init) by_loc[locs_by_id[e.id]].push_back(e.id);
    }
    for (size_t tp = 0; tp < chosen.size(); ++tp) {
      for (const auto& [expr, want] : chosen[tp]->constraints) {
        std::vector<bool> visiting(events.size(), false);
        auto v = eval_sym(expr, static_cast<int>(tp), visiting);
        if (!v || (v->canonical() != 0) != want) return;
      }
    }

    // co per location: init first, the rest in lexicographic permutation
    // order over event ids.
    std::map<std::string, std::vector<int>> co;
    for (const Event& e : events)
      if (e.is_init) co[e.loc] = {e.id};
    for (auto& [loc, ids] : by_loc) {
      if (!co.count(loc)) return;  // write to a location missing from init
      std::sort(ids.begin(), ids.end());
    }

    std::vector<std::string> locs;
    for (const auto& [loc, ids] : by_loc) {
      (void)ids;
      locs.push_back(loc);
    }
    enumerate_co(0, locs, by_loc, co, value_of);
  }

  void enumerate_co(size_t loc_ix, const std::vector<std::string>& locs,
                    std::map<std::string, std::vector<int>>& by_loc,
                    std::map<std::string, std::vector<int>>& co,
                    const std::vector<Value>& value_of) {
    if (stop) return;
    poll_deadline();
    if (loc_ix == locs.size()) {
      emit(co, value_of);
      return;
    }
    const std::string& loc = locs[loc_ix];
    std::vector<int>& perm = by_loc[loc];
    std::vector<int>& order = co[loc];
    size_t base = order.size();
    do {
      order.resize(base);
      order.insert(order.end(), perm.begin(), perm.end());
      enumerate_co(loc_ix + 1, locs, by_loc, co, value_of);
      if (stop) return;
    } while (std::next_permutation(perm.begin(), perm.end()));
    order.resize(base);
  }

  // RMW pairs must be co-adjacent to their rf source.
  bool atomic_ok(const std::map<std::string, std::vector<int>>& co) const {
    for (const auto& [r, w] : rmw_pairs) {
      auto l = loc_of(w);
      const std::vector<int>& order = co.at(*l);
      auto it = std::find(order.begin(), order.end(), rf[r]);
      if (it == order.end() || std::next(it) == order.end() || *std::next(it) != w)
        return false;
    }
    return true;
  }

  void emit(const std::map<std::string, std::vector<int>>& co,
            const std::vector<Value>& value_of) {
    if (!atomic_ok(co)) return;
    if (++yielded > opts.candidate_cap)
      throw Error(ErrorKind::CandidateExplosion,
                  "candidate budget of " + std::to_string(opts.candidate_cap) +
                      " executions exceeded");

    CandidateExecution exec;
    exec.events = events;
    for (Event& e : exec.events) {
      if (is_fence(e.kind)) continue;
      e.value = value_of[e.id];
      if (e.loc.empty()) e.loc = *loc_of(e.id);
    }
    exec.rf_src = rf;
    exec.co = co;
    for (const ThreadPath* p : chosen) exec.path_choices.push_back(p->choice_index);

    for (size_t tp = 0; tp < chosen.size(); ++tp) {
      int tid = test.threads[tp].id;
      for (const auto& [reg, expr] : chosen[tp]->final_regs) {
        std::vector<bool> visiting(events.size(), false);
        if (auto v = eval_sym(expr, static_cast<int>(tp), visiting))
          exec.final_regs[{tid, reg}] = *v;
      }
    }

    auto dep_events = [&](int target_id, const std::vector<int>& slots,
                          std::vector<std::pair<int, int>>& out) {
      int tp = thread_pos_of[target_id];
      for (int slot : slots) {
        auto it = slot_event.find({tp, slot});
        if (it != slot_event.end()) out.emplace_back(it->second, target_id);
      }
    };
    for (const Event& e : events) {
      if (e.is_init) continue;
      const PathAccess* pa = access_of[e.id];
      dep_events(e.id, pa->addr_deps, exec.addr_dep);
      dep_events(e.id, pa->data_deps, exec.data_dep);
      dep_events(e.id, pa->ctrl_deps, exec.ctrl_dep);
    }

    if (!yield(exec)) stop = true;
  }

  void run() {
    events.clear();
    access_of.clear();
    thread_pos_of.clear();
    reads.clear();
    writes.clear();
    rmw_pairs.clear();
    slot_event.clear();

    for (const auto& [loc, info] : test.init.locations) {
      Event e;
      e.id = static_cast<int>(events.size());
      e.kind = EventKind::W;
      e.loc = loc;
      e.value = info.init;
      e.is_init = true;
      writes.push_back(e.id);
      events.push_back(std::move(e));
      access_of.push_back(nullptr);
      thread_pos_of.push_back(-1);
    }
    for (size_t tp = 0; tp < chosen.size(); ++tp) {
      const ThreadPath& path = *chosen[tp];
      int first_id = static_cast<int>(events.size());
      for (size_t i = 0; i < path.accesses.size(); ++i) {
        const PathAccess& pa = path.accesses[i];
        Event e;
        e.id = static_cast<int>(events.size());
        e.thread = test.threads[tp].id;
        e.po_index = static_cast<int>(i);
        e.kind = pa.kind == PathAccess::Kind::Fence ? EventKind::F
                 : pa.kind == PathAccess::Kind::Read
                     ? (pa.is_rmw_read ? EventKind::RmwR : EventKind::R)
                     : (pa.is_rmw_write ? EventKind::RmwW : EventKind::W);
        e.loc = pa.loc;
        e.order = pa.order;
        e.fence = pa.fence;
        e.rmw_pair = pa.rmw_pair >= 0 ? first_id + pa.rmw_pair : -1;
        e.origin_stmt = pa.origin_stmt;
        e.origin_iter = pa.origin_iter;
        if (is_read(e.kind)) {
          reads.push_back(e.id);
          slot_event[{static_cast<int>(tp), pa.read_slot}] = e.id;
        }
        if (is_write(e.kind)) writes.push_back(e.id);
        if (pa.is_rmw_write) rmw_pairs.emplace_back(first_id + pa.rmw_pair, e.id);
        events.push_back(std::move(e));
        access_of.push_back(&pa);
        thread_pos_of.push_back(static_cast<int>(tp));
      }
    }
    rf.assign(events.size(), -1);
    assign_reads(0);
  }
};

}  // namespace

void enumerate_candidates(const LitmusTest& test, const EnumOptions& opts,
                          const std::function<bool(const CandidateExecution&)>& yield) {
  // Per-thread feasible paths; stuck paths contribute nothing.
  std::vector<std::vector<ThreadPath>> paths;
  for (const auto& t : test.threads) {
    std::vector<ThreadPath> all = thread_paths(test, t);
    std::vector<ThreadPath> live;
    for (auto& p : all)
      if (!p.stuck) live.push_back(std::move(p));
    paths.push_back(std::move(live));
  }

  uint64_t yielded = 0;
  Enumerator en{.test = test, .opts = opts, .yield = yield, .yielded = yielded};

  // Cartesian product of path choices, in choice order.
  std::vector<size_t> pick(paths.size(), 0);
  std::function<void(size_t)> combine = [&](size_t tp) {
    if (en.stop) return;
    if (tp == paths.size()) {
      en.chosen.clear();
      for (size_t i = 0; i < paths.size(); ++i) en.chosen.push_back(&paths[i][pick[i]]);
      en.run();
      return;
    }
    if (paths[tp].empty()) return;  // every path stuck: no executions
    for (pick[tp] = 0; pick[tp] < paths[tp].size(); ++pick[tp]) combine(tp + 1);
  };
  combine(0);
}

std::vector<CandidateExecution> enumerate_all(const LitmusTest& test, const EnumOptions& opts) {
  std::vector<CandidateExecution> out;
  enumerate_candidates(test, opts, [&](const CandidateExecution& e) {
    out.push_back(e);
    return true;
  });
  return out;
}

}  // namespace lct::engine
