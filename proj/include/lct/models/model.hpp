#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lct/litmus/order.hpp"

namespace lct::models {

enum class ModelDialect { Source, Asm, Any };
enum class RaceSemantics { UBOnRace, RaceFreeByConstruction };

// Event-class predicate used as an identity relation: kind, ordering
// annotation (at-least over the C11 lattice, or exact), fence domain.
struct ClassPred {
  enum class Kind { Any, R, W, F, RMW, M };  // M = R or W
  enum class OrderSel { AnyOrder, AtLeastRel, AtLeastAcq, Exactly };

  Kind kind = Kind::Any;
  OrderSel sel = OrderSel::AnyOrder;
  litmus::MemOrder order = litmus::MemOrder::Rlx;  // Exactly only
  std::optional<litmus::FenceKind> fence;          // fence-domain filter
};

// Relational-algebra expression over the base relations of one execution.
// Base names: po, po-loc, rf, rf-internal, rf-external, co, co-external,
// fr, fr-external, addr, data, ctrl, id.
struct RelationExpr;
using RelExprPtr = std::shared_ptr<const RelationExpr>;

struct RelationExpr {
  enum class Op { Base, Class, Union, Inter, Diff, Seq, Inverse, Plus, Star };
  Op op = Op::Base;
  std::string base;
  ClassPred cls;
  RelExprPtr a, b;
};

RelExprPtr rel_base(std::string name);
RelExprPtr rel_class(ClassPred cls);
RelExprPtr rel_union(RelExprPtr a, RelExprPtr b);
RelExprPtr rel_inter(RelExprPtr a, RelExprPtr b);
RelExprPtr rel_diff(RelExprPtr a, RelExprPtr b);
RelExprPtr rel_seq(RelExprPtr a, RelExprPtr b);
RelExprPtr rel_inverse(RelExprPtr a);
RelExprPtr rel_plus(RelExprPtr a);
RelExprPtr rel_star(RelExprPtr a);

struct Constraint {
  enum class Kind { Acyclic, Irreflexive, Empty };
  Kind kind = Kind::Acyclic;
  RelExprPtr expr;
  std::string label;
};

struct ModelSpec {
  std::string name;
  ModelDialect dialect = ModelDialect::Any;
  std::vector<Constraint> constraints;
  RaceSemantics race_semantics = RaceSemantics::RaceFreeByConstruction;
  // Happens-before used by race detection; per-execution relation.
  RelExprPtr hb;
};

}  // namespace lct::models
