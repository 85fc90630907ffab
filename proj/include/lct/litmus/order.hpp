#pragma once

#include <string>

namespace lct::litmus {

// Ordering annotations. Source statements use the C11 set {NA..SC}; assembly
// accesses use Rlx (plain), Acq (LDAR), AcqPC (LDAPR), Rel (STLR). AcqPC sits
// strictly below Acq: it is not ordered against earlier release stores.
enum class MemOrder { NA, Rlx, AcqPC, Acq, Rel, AcqRel, SC };

// Barrier domain. Full is carried by DMB ISH and by source seq_cst fences;
// Ld/St by DMB ISHLD / DMB ISHST. Non-SC source fences carry None and
// participate in synchronizes-with via their MemOrder alone.
enum class FenceKind { None, Full, Ld, St };

inline bool order_at_least_acquire(MemOrder o) {
  return o == MemOrder::Acq || o == MemOrder::AcqRel || o == MemOrder::SC;
}
inline bool order_at_least_release(MemOrder o) {
  return o == MemOrder::Rel || o == MemOrder::AcqRel || o == MemOrder::SC;
}

// C11 splits an RMW's annotation between its read and write halves.
inline MemOrder rmw_read_order(MemOrder o) {
  switch (o) {
    case MemOrder::Acq:
    case MemOrder::AcqRel: return MemOrder::Acq;
    case MemOrder::SC: return MemOrder::SC;
    default: return MemOrder::Rlx;
  }
}
inline MemOrder rmw_write_order(MemOrder o) {
  switch (o) {
    case MemOrder::Rel:
    case MemOrder::AcqRel: return MemOrder::Rel;
    case MemOrder::SC: return MemOrder::SC;
    default: return MemOrder::Rlx;
  }
}

std::string order_name(MemOrder o);          // "relaxed", "acquire", ...
std::string order_c11_name(MemOrder o);      // "memory_order_relaxed", ...

}  // namespace lct::litmus
