#include "lct/engine/execution.hpp"

#include "lct/models/eval.hpp"

namespace lct::engine {

std::vector<int> CandidateExecution::init_writes() const {
  std::vector<int> out;
  for (const Event& e : events)
    if (e.is_init) out.push_back(e.id);
  return out;
}

models::Relation derive_fr(const CandidateExecution& exec) {
  return models::eval_relation(models::rel_base("fr"), exec);
}

}  // namespace lct::engine
