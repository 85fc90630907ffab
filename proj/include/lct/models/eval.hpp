#pragma once

#include <map>

#include "lct/engine/execution.hpp"
#include "lct/models/model.hpp"
#include "lct/models/relation.hpp"

namespace lct::models {

struct Verdict {
  bool allowed = true;
  std::vector<std::string> violated;
};

// Caches base relations of one execution across constraint evaluations.
class EvalContext {
 public:
  explicit EvalContext(const engine::CandidateExecution& exec);

  Relation eval(const RelExprPtr& expr) const;
  const engine::CandidateExecution& exec() const { return *exec_; }
  int size() const { return n_; }

 private:
  const engine::CandidateExecution* exec_;
  int n_;
  mutable std::map<std::string, Relation> base_cache_;

  Relation base(const std::string& name) const;
  Relation class_relation(const ClassPred& cls) const;
};

Relation eval_relation(const RelExprPtr& expr, const engine::CandidateExecution& exec);

Verdict check_model(const ModelSpec& model, const EvalContext& ctx);
Verdict check_model(const ModelSpec& model, const engine::CandidateExecution& exec);

}  // namespace lct::models
