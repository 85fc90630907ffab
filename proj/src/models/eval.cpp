#include "lct/models/eval.hpp"

#include "lct/litmus/error.hpp"

namespace lct::models {

namespace {

using engine::CandidateExecution;
using engine::Event;
using engine::EventKind;
using litmus::FenceKind;
using litmus::MemOrder;

bool order_matches(const ClassPred& cls, const Event& e) {
  switch (cls.sel) {
    case ClassPred::OrderSel::AnyOrder:
      return true;
    case ClassPred::OrderSel::Exactly:
      return e.order == cls.order;
    case ClassPred::OrderSel::AtLeastRel:
      return litmus::order_at_least_release(e.order);
    case ClassPred::OrderSel::AtLeastAcq:
      return litmus::order_at_least_acquire(e.order);
  }
  return false;
}

bool kind_matches(ClassPred::Kind k, EventKind ek) {
  switch (k) {
    case ClassPred::Kind::Any: return true;
    case ClassPred::Kind::R: return engine::is_read(ek);
    case ClassPred::Kind::W: return engine::is_write(ek);
    case ClassPred::Kind::F: return engine::is_fence(ek);
    case ClassPred::Kind::RMW: return ek == EventKind::RmwR || ek == EventKind::RmwW;
    case ClassPred::Kind::M: return engine::is_read(ek) || engine::is_write(ek);
  }
  return false;
}

}  // namespace

EvalContext::EvalContext(const CandidateExecution& exec)
    : exec_(&exec), n_(static_cast<int>(exec.events.size())) {}

Relation EvalContext::class_relation(const ClassPred& cls) const {
  Relation r(n_);
  for (const Event& e : exec_->events) {
    if (!kind_matches(cls.kind, e.kind)) continue;
    if (!order_matches(cls, e)) continue;
    if (cls.fence && e.fence != *cls.fence) continue;
    r.set(e.id, e.id);
  }
  return r;
}

Relation EvalContext::base(const std::string& name) const {
  auto it = base_cache_.find(name);
  if (it != base_cache_.end()) return it->second;

  const auto& ev = exec_->events;
  Relation r(n_, name);

  auto external = [&](int a, int b) { return ev[a].thread != ev[b].thread; };

  if (name == "id") {
    r = Relation::identity(n_).named(name);
  } else if (name == "po" || name == "po-loc") {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) {
        if (ev[i].is_init || ev[j].is_init) continue;
        if (ev[i].thread != ev[j].thread || ev[i].po_index >= ev[j].po_index) continue;
        if (name == "po-loc" && (ev[i].loc.empty() || ev[i].loc != ev[j].loc)) continue;
        r.set(i, j);
      }
  } else if (name == "rf" || name == "rf-internal" || name == "rf-external") {
    for (int i = 0; i < n_; ++i) {
      int w = exec_->rf_src[i];
      if (w < 0) continue;
      if (name == "rf-internal" && external(w, i)) continue;
      if (name == "rf-external" && !external(w, i)) continue;
      r.set(w, i);
    }
  } else if (name == "co" || name == "co-external") {
    for (const auto& [loc, order] : exec_->co) {
      for (size_t a = 0; a < order.size(); ++a)
        for (size_t b = a + 1; b < order.size(); ++b) {
          if (name == "co-external" && !external(order[a], order[b])) continue;
          r.set(order[a], order[b]);
        }
    }
  } else if (name == "fr" || name == "fr-external") {
    // fr = rf⁻¹ ; co restricted to the location: the read sees everything
    // coherence-after its source.
    for (const auto& [loc, order] : exec_->co) {
      for (size_t a = 0; a < order.size(); ++a) {
        for (int read = 0; read < n_; ++read) {
          if (exec_->rf_src[read] != order[a]) continue;
          if (ev[read].loc != loc) continue;
          for (size_t b = a + 1; b < order.size(); ++b) {
            if (name == "fr-external" && !external(read, order[b])) continue;
            if (read == order[b]) continue;
            r.set(read, order[b]);
          }
        }
      }
    }
  } else if (name == "addr" || name == "data" || name == "ctrl") {
    const auto& edges = name == "addr"  ? exec_->addr_dep
                        : name == "data" ? exec_->data_dep
                                         : exec_->ctrl_dep;
    for (const auto& [a, b] : edges) r.set(a, b);
  } else {
    throw Error(ErrorKind::UnknownBaseRelation, "unknown base relation: " + name);
  }

  base_cache_.emplace(name, r);
  return r;
}

Relation EvalContext::eval(const RelExprPtr& expr) const {
  switch (expr->op) {
    case RelationExpr::Op::Base: return base(expr->base);
    case RelationExpr::Op::Class: return class_relation(expr->cls);
    case RelationExpr::Op::Union: return eval(expr->a) | eval(expr->b);
    case RelationExpr::Op::Inter: return eval(expr->a) & eval(expr->b);
    case RelationExpr::Op::Diff: return eval(expr->a) - eval(expr->b);
    case RelationExpr::Op::Seq: return eval(expr->a).seq(eval(expr->b));
    case RelationExpr::Op::Inverse: return eval(expr->a).inverse();
    case RelationExpr::Op::Plus: return eval(expr->a).plus();
    case RelationExpr::Op::Star: return eval(expr->a).star();
  }
  throw Error(ErrorKind::UnknownBaseRelation, "malformed relation expression");
}

Relation eval_relation(const RelExprPtr& expr, const CandidateExecution& exec) {
  return EvalContext(exec).eval(expr);
}

Verdict check_model(const ModelSpec& model, const EvalContext& ctx) {
  Verdict v;
  for (const Constraint& c : model.constraints) {
    Relation r = ctx.eval(c.expr);
    bool ok = true;
    switch (c.kind) {
      case Constraint::Kind::Acyclic: ok = r.acyclic(); break;
      case Constraint::Kind::Irreflexive: ok = r.irreflexive(); break;
      case Constraint::Kind::Empty: ok = r.empty(); break;
    }
    if (!ok) {
      v.allowed = false;
      v.violated.push_back(c.label);
    }
  }
  return v;
}

Verdict check_model(const ModelSpec& model, const CandidateExecution& exec) {
  EvalContext ctx(exec);
  return check_model(model, ctx);
}

}  // namespace lct::models
