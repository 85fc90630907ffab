#include "lct/models/registry.hpp"

#include "lct/litmus/error.hpp"

namespace lct::models {

namespace {

RelExprPtr make(RelationExpr e) { return std::make_shared<RelationExpr>(std::move(e)); }

}  // namespace

RelExprPtr rel_base(std::string name) {
  RelationExpr e;
  e.op = RelationExpr::Op::Base;
  e.base = std::move(name);
  return make(std::move(e));
}

RelExprPtr rel_class(ClassPred cls) {
  RelationExpr e;
  e.op = RelationExpr::Op::Class;
  e.cls = cls;
  return make(std::move(e));
}

#define LCT_BINOP(fn, opname)                           \
  RelExprPtr fn(RelExprPtr a, RelExprPtr b) {           \
    RelationExpr e;                                     \
    e.op = RelationExpr::Op::opname;                    \
    e.a = std::move(a);                                 \
    e.b = std::move(b);                                 \
    return make(std::move(e));                          \
  }

LCT_BINOP(rel_union, Union)
LCT_BINOP(rel_inter, Inter)
LCT_BINOP(rel_diff, Diff)
LCT_BINOP(rel_seq, Seq)
#undef LCT_BINOP

#define LCT_UNOP(fn, opname)                            \
  RelExprPtr fn(RelExprPtr a) {                         \
    RelationExpr e;                                     \
    e.op = RelationExpr::Op::opname;                    \
    e.a = std::move(a);                                 \
    return make(std::move(e));                          \
  }

LCT_UNOP(rel_inverse, Inverse)
LCT_UNOP(rel_plus, Plus)
LCT_UNOP(rel_star, Star)
#undef LCT_UNOP

namespace {

using litmus::FenceKind;
using litmus::MemOrder;

ClassPred kind_pred(ClassPred::Kind k) {
  ClassPred p;
  p.kind = k;
  return p;
}

ClassPred order_pred(ClassPred::Kind k, ClassPred::OrderSel sel,
                     MemOrder order = MemOrder::Rlx) {
  ClassPred p;
  p.kind = k;
  p.sel = sel;
  p.order = order;
  return p;
}

ClassPred fence_pred(FenceKind domain) {
  ClassPred p;
  p.kind = ClassPred::Kind::F;
  p.fence = domain;
  return p;
}

RelExprPtr seq3(RelExprPtr a, RelExprPtr b, RelExprPtr c) {
  return rel_seq(rel_seq(std::move(a), std::move(b)), std::move(c));
}

RelExprPtr union_all(std::vector<RelExprPtr> parts) {
  RelExprPtr acc = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) acc = rel_union(acc, parts[i]);
  return acc;
}

// Communication relations shared by several definitions.
RelExprPtr com() {
  return union_all({rel_base("rf"), rel_base("co"), rel_base("fr")});
}

// Conservative happens-before for race-free-by-construction models: every
// conflicting pair is ordered through po/rf/co/fr, so no race is reported.
RelExprPtr trivial_hb() {
  return rel_plus(rel_union(rel_base("po"), com()));
}

ModelSpec make_sc() {
  ModelSpec m;
  m.name = "sc";
  m.dialect = ModelDialect::Any;
  m.race_semantics = RaceSemantics::RaceFreeByConstruction;
  m.constraints.push_back({Constraint::Kind::Acyclic,
                           rel_union(rel_base("po"), com()), "sc"});
  m.hb = trivial_hb();
  return m;
}

Constraint sc_per_loc() {
  return {Constraint::Kind::Acyclic, rel_union(rel_base("po-loc"), com()),
          "sc-per-loc"};
}

ModelSpec make_tso() {
  ModelSpec m;
  m.name = "tso";
  m.dialect = ModelDialect::Any;
  m.race_semantics = RaceSemantics::RaceFreeByConstruction;
  m.constraints.push_back(sc_per_loc());

  // Full fences plus RMWs order everything across them.
  RelExprPtr po = rel_base("po");
  RelExprPtr rmw = rel_class(kind_pred(ClassPred::Kind::RMW));
  RelExprPtr fence_order = union_all({
      seq3(po, rel_class(fence_pred(FenceKind::Full)), po),
      rel_seq(rmw, po),
      rel_seq(po, rmw),
  });
  // ppo drops W→R pairs unless fenced.
  RelExprPtr w_to_r = seq3(rel_class(kind_pred(ClassPred::Kind::W)), po,
                           rel_class(kind_pred(ClassPred::Kind::R)));
  RelExprPtr ppo = rel_diff(po, rel_diff(w_to_r, fence_order));
  m.constraints.push_back(
      {Constraint::Kind::Acyclic,
       union_all({ppo, rel_base("rf-external"), rel_base("co"), rel_base("fr"),
                  fence_order}),
       "tso"});
  m.hb = trivial_hb();
  return m;
}

// sw: release writes (or release fences over po-later writes) synchronize
// with acquire reads (or acquire fences po-after the read) through rf.
RelExprPtr rc11_sw() {
  RelExprPtr rel_writes =
      rel_class(order_pred(ClassPred::Kind::W, ClassPred::OrderSel::AtLeastRel));
  RelExprPtr rel_fence_writes =
      seq3(rel_class(order_pred(ClassPred::Kind::F, ClassPred::OrderSel::AtLeastRel)),
           rel_base("po"), rel_class(kind_pred(ClassPred::Kind::W)));
  RelExprPtr acq_reads =
      rel_class(order_pred(ClassPred::Kind::R, ClassPred::OrderSel::AtLeastAcq));
  RelExprPtr acq_fence_reads =
      seq3(rel_class(kind_pred(ClassPred::Kind::R)), rel_base("po"),
           rel_class(order_pred(ClassPred::Kind::F, ClassPred::OrderSel::AtLeastAcq)));
  return seq3(rel_union(rel_writes, rel_fence_writes), rel_base("rf"),
              rel_union(acq_reads, acq_fence_reads));
}

ModelSpec make_rc11(bool permit_lb) {
  ModelSpec m;
  m.name = permit_lb ? "rc11_lb" : "rc11_lite";
  m.dialect = ModelDialect::Source;
  m.race_semantics = RaceSemantics::UBOnRace;

  m.constraints.push_back(
      {Constraint::Kind::Acyclic, rel_union(rel_base("po-loc"), com()),
       "coherence"});

  RelExprPtr hb = rel_plus(rel_union(rel_base("po"), rc11_sw()));
  m.constraints.push_back(
      {Constraint::Kind::Irreflexive, rel_seq(hb, rel_star(com())), "hb"});

  if (!permit_lb)
    m.constraints.push_back({Constraint::Kind::Acyclic,
                             rel_union(rel_base("po"), rel_base("rf")),
                             "no-lb"});
  m.hb = hb;
  return m;
}

ModelSpec make_armv8() {
  ModelSpec m;
  m.name = "armv8_lite";
  m.dialect = ModelDialect::Asm;
  m.race_semantics = RaceSemantics::RaceFreeByConstruction;
  m.constraints.push_back(sc_per_loc());

  RelExprPtr po = rel_base("po");
  RelExprPtr dob = union_all({
      rel_base("addr"),
      rel_base("data"),
      rel_seq(rel_base("ctrl"), rel_class(kind_pred(ClassPred::Kind::W))),
  });
  RelExprPtr acq_r =
      rel_class(order_pred(ClassPred::Kind::R, ClassPred::OrderSel::Exactly, MemOrder::Acq));
  RelExprPtr acqpc_r =
      rel_class(order_pred(ClassPred::Kind::R, ClassPred::OrderSel::Exactly, MemOrder::AcqPC));
  RelExprPtr rel_w =
      rel_class(order_pred(ClassPred::Kind::W, ClassPred::OrderSel::Exactly, MemOrder::Rel));
  RelExprPtr bob = union_all({
      seq3(po, rel_class(fence_pred(FenceKind::Full)), po),
      rel_seq(seq3(rel_class(kind_pred(ClassPred::Kind::R)), po,
                   rel_class(fence_pred(FenceKind::Ld))),
              po),
      rel_seq(seq3(rel_class(kind_pred(ClassPred::Kind::W)), po,
                   rel_class(fence_pred(FenceKind::St))),
              rel_seq(po, rel_class(kind_pred(ClassPred::Kind::W)))),
      rel_seq(po, rel_w),       // everything is ordered before a release store
      rel_seq(acq_r, po),       // LDAR orders against everything later
      rel_seq(acqpc_r, po),     // LDAPR too ...
      seq3(rel_w, po, acq_r),   // ... but only LDAR waits for earlier STLR
  });
  RelExprPtr ob = union_all({rel_base("rf-external"), rel_base("co-external"),
                             rel_base("fr-external"), dob, bob});
  m.constraints.push_back({Constraint::Kind::Acyclic, ob, "external"});
  m.hb = trivial_hb();
  return m;
}

}  // namespace

const std::map<std::string, ModelSpec>& builtin_models() {
  static const std::map<std::string, ModelSpec> registry = [] {
    std::map<std::string, ModelSpec> r;
    for (ModelSpec m : {make_sc(), make_tso(), make_rc11(false), make_rc11(true), make_armv8()})
      r.emplace(m.name, std::move(m));
    return r;
  }();
  return registry;
}

const ModelSpec& lookup_model(const std::string& name) {
  const auto& reg = builtin_models();
  auto it = reg.find(name);
  if (it == reg.end()) throw Error(ErrorKind::UnknownModel, "unknown model: " + name);
  return it->second;
}

}  // namespace lct::models
