#include "lct/transforms/generate.hpp"

#include <utility>

#include "lct/litmus/error.hpp"

namespace lct::transforms {

using litmus::Block;
using lct::Error;
using lct::ErrorKind;
using litmus::Expr;
using litmus::ExprPtr;
using litmus::FinalPredicate;
using litmus::LitmusTest;
using litmus::LocationInfo;
using litmus::MemOrder;
using litmus::ObservableKey;
using litmus::PredNode;
using litmus::PredPtr;
using litmus::RegisterInfo;
using litmus::Statement;
using litmus::Thread;
using litmus::Value;
using litmus::Width;

namespace {

struct Scheme {
  MemOrder load;
  MemOrder store;
  bool sc_fence;  // SC fence between consecutive statements of each thread
};

Scheme scheme_of(const std::string& name) {
  if (name == "rlx") return {MemOrder::Rlx, MemOrder::Rlx, false};
  if (name == "ra") return {MemOrder::Acq, MemOrder::Rel, false};
  if (name == "sc") return {MemOrder::SC, MemOrder::SC, false};
  if (name == "na") return {MemOrder::NA, MemOrder::NA, false};
  if (name == "rlx+scf") return {MemOrder::Rlx, MemOrder::Rlx, true};
  throw Error(ErrorKind::UnsupportedShape, "unknown annotation scheme: '" + name + "'");
}

Statement st_store(std::string loc, ExprPtr value, MemOrder o) {
  Statement s;
  s.kind = Statement::Kind::Store;
  s.loc = std::move(loc);
  s.value = std::move(value);
  s.order = o;
  return s;
}

Statement st_store_k(std::string loc, int64_t k, MemOrder o) {
  return st_store(std::move(loc), Expr::constant(k), o);
}

Statement st_load(std::string reg, std::string loc, MemOrder o) {
  Statement s;
  s.kind = Statement::Kind::Load;
  s.reg = std::move(reg);
  s.loc = std::move(loc);
  s.order = o;
  return s;
}

Statement st_fence_sc() {
  Statement s;
  s.kind = Statement::Kind::Fence;
  s.order = MemOrder::SC;
  return s;
}

Statement st_assign(std::string reg, ExprPtr value) {
  Statement s;
  s.kind = Statement::Kind::Assign;
  s.reg = std::move(reg);
  s.value = std::move(value);
  return s;
}

Statement st_if(ExprPtr cond, Block then_body, Block else_body) {
  Statement s;
  s.kind = Statement::Kind::If;
  s.cond = std::move(cond);
  s.then_body = std::make_shared<Block>(std::move(then_body));
  s.else_body = std::make_shared<Block>(std::move(else_body));
  return s;
}

// With the fence scheme, an SC fence separates every consecutive pair.
Block fenced(Block body, const Scheme& sch) {
  if (!sch.sc_fence || body.size() < 2) return body;
  Block out;
  for (size_t i = 0; i < body.size(); ++i) {
    if (i) out.push_back(st_fence_sc());
    out.push_back(std::move(body[i]));
  }
  return out;
}

// LB per-thread body: load `from` into r0, then store 1 to `to`, dressed per
// variant. Every variant stores the constant 1, so source outcome sets match
// the plain shape; the dressing only exists for a compiler to strip.
Block lb_variant_body(int variant, const std::string& from, const std::string& to,
                      const Scheme& sch) {
  ExprPtr r0 = Expr::regref("r0");
  Block b;
  b.push_back(st_load("r0", from, sch.load));
  switch (variant) {
    case 0:
    case 1:  // plain
      b.push_back(st_store_k(to, 1, sch.store));
      break;
    case 2:  // false data dependency folded into the stored value
      b.push_back(st_store(
          to, Expr::add(Expr::constant(1), Expr::eq(Expr::eq(r0, r0), Expr::constant(0))),
          sch.store));
      break;
    case 3:  // tautological branch, identical arms
      b.push_back(st_if(Expr::eq(r0, r0), {st_store_k(to, 1, sch.store)},
                        {st_store_k(to, 1, sch.store)}));
      break;
    case 4:  // data-dependent branch, identical arms
      b.push_back(st_if(Expr::eq(r0, Expr::constant(1)), {st_store_k(to, 1, sch.store)},
                        {st_store_k(to, 1, sch.store)}));
      break;
    case 5:  // dead dependent assignment
      b.push_back(st_assign("r1", Expr::add(r0, Expr::constant(0))));
      b.push_back(st_store_k(to, 1, sch.store));
      break;
    case 6:  // dependency laundered through a register; value still 1
      b.push_back(st_assign("r1", Expr::eq(r0, r0)));
      b.push_back(st_store(to, Expr::add(Expr::regref("r1"), Expr::constant(0)), sch.store));
      break;
    case 7:  // extra unobserved load of the same location
      b.push_back(st_load("r1", from, sch.load));
      b.push_back(st_store_k(to, 1, sch.store));
      break;
    default:
      throw Error(ErrorKind::UnsupportedShape,
                  "unknown LB variant: " + std::to_string(variant));
  }
  return fenced(std::move(b), sch);
}

PredPtr atom_reg(int thread, const std::string& reg, int64_t v) {
  return PredNode::atom(ObservableKey::reg(thread, reg), v);
}

PredPtr atom_mem(const std::string& loc, int64_t v) {
  return PredNode::atom(ObservableKey::mem(loc), v);
}

struct ShapeBuild {
  std::vector<Block> bodies;
  PredPtr exists;
  std::vector<std::string> locations;  // zero-initialized at grid width
};

ShapeBuild build_shape(const PatternSpec& spec, const Scheme& sch) {
  const std::string& s = spec.shape;
  if (s == "LB") {
    return {{lb_variant_body(spec.variant_p0, "x", "y", sch),
             lb_variant_body(spec.variant_p1, "y", "x", sch)},
            PredNode::conj(atom_reg(0, "r0", 1), atom_reg(1, "r0", 1)),
            {"x", "y"}};
  }
  if (spec.variant_p0 || spec.variant_p1)
    throw Error(ErrorKind::UnsupportedShape, "body variants are defined for LB only");
  if (s == "MP") {
    return {{fenced({st_store_k("x", 1, sch.store), st_store_k("y", 1, sch.store)}, sch),
             fenced({st_load("r0", "y", sch.load), st_load("r1", "x", sch.load)}, sch)},
            PredNode::conj(atom_reg(1, "r0", 1), atom_reg(1, "r1", 0)),
            {"x", "y"}};
  }
  if (s == "SB") {
    return {{fenced({st_store_k("x", 1, sch.store), st_load("r0", "y", sch.load)}, sch),
             fenced({st_store_k("y", 1, sch.store), st_load("r0", "x", sch.load)}, sch)},
            PredNode::conj(atom_reg(0, "r0", 0), atom_reg(1, "r0", 0)),
            {"x", "y"}};
  }
  if (s == "S") {
    return {{fenced({st_store_k("x", 2, sch.store), st_store_k("y", 1, sch.store)}, sch),
             fenced({st_load("r0", "y", sch.load), st_store_k("x", 1, sch.store)}, sch)},
            PredNode::conj(atom_reg(1, "r0", 1), atom_mem("x", 2)),
            {"x", "y"}};
  }
  if (s == "R") {
    return {{fenced({st_store_k("x", 1, sch.store), st_store_k("y", 1, sch.store)}, sch),
             fenced({st_store_k("y", 2, sch.store), st_load("r0", "x", sch.load)}, sch)},
            PredNode::conj(atom_mem("y", 2), atom_reg(1, "r0", 0)),
            {"x", "y"}};
  }
  if (s == "2+2W") {
    return {{fenced({st_store_k("x", 2, sch.store), st_store_k("y", 1, sch.store)}, sch),
             fenced({st_store_k("y", 2, sch.store), st_store_k("x", 1, sch.store)}, sch)},
            PredNode::conj(atom_mem("x", 2), atom_mem("y", 2)),
            {"x", "y"}};
  }
  if (s == "W+RR") {
    return {{{st_store_k("x", 1, sch.store)},
             fenced({st_load("r0", "x", sch.load), st_load("r1", "x", sch.load)}, sch)},
            PredNode::conj(atom_reg(1, "r0", 1), atom_reg(1, "r1", 0)),
            {"x"}};
  }
  throw Error(ErrorKind::UnsupportedShape, "unknown shape: '" + s + "'");
}

// Test names must be identifiers; '+' shapes get letter spellings.
std::string shape_token(const std::string& shape) {
  if (shape == "2+2W") return "WW22";
  if (shape == "W+RR") return "WRR";
  return shape;
}

std::string scheme_token(const std::string& scheme) {
  return scheme == "rlx+scf" ? "rlxscf" : scheme;
}

std::string width_token(Width w, bool is_signed) {
  return std::to_string(static_cast<int>(w)) + (is_signed ? "s" : "u");
}

// Registers declared by a block, for width annotation.
void collect_regs(const Block& b, std::map<std::string, RegisterInfo>& regs, Width w, bool sg) {
  for (const auto& st : b) {
    if (!st.reg.empty()) regs[st.reg] = RegisterInfo{w, sg};
    if (st.then_body) collect_regs(*st.then_body, regs, w, sg);
    if (st.else_body) collect_regs(*st.else_body, regs, w, sg);
  }
}

LitmusTest build_test(const PatternSpec& spec) {
  Scheme sch = scheme_of(spec.scheme);
  ShapeBuild shape = build_shape(spec, sch);
  LitmusTest test;
  test.name = pattern_test_name(spec);
  test.dialect = litmus::Dialect::Source;
  for (const auto& loc : shape.locations)
    test.init.locations[loc] =
        LocationInfo{Value::integer(0, spec.width, spec.is_signed), spec.width, spec.is_signed};
  for (size_t i = 0; i < shape.bodies.size(); ++i) {
    Thread t;
    t.id = static_cast<int>(i);
    t.body = std::move(shape.bodies[i]);
    collect_regs(t.body, t.registers, spec.width, spec.is_signed);
    test.threads.push_back(std::move(t));
  }
  test.final_pred = FinalPredicate{FinalPredicate::Mode::Exists, shape.exists};
  test.metadata["shape"] = spec.shape;
  test.metadata["scheme"] = spec.scheme;
  test.metadata["width"] = width_token(spec.width, spec.is_signed);
  if (spec.variant_p0 || spec.variant_p1)
    test.metadata["variants"] =
        std::to_string(spec.variant_p0) + "," + std::to_string(spec.variant_p1);
  return test;
}

}  // namespace

std::string pattern_test_name(const PatternSpec& spec) {
  std::string name = shape_token(spec.shape);
  if (spec.variant_p0 || spec.variant_p1)
    name += "_" + std::to_string(spec.variant_p0) + "_" + std::to_string(spec.variant_p1);
  if (spec.scheme != "rlx" || !(spec.variant_p0 || spec.variant_p1))
    name += "_" + scheme_token(spec.scheme);
  name += "_" + width_token(spec.width, spec.is_signed);
  return name;
}

std::vector<PatternSpec> preset_grid(const std::string& name) {
  std::vector<PatternSpec> grid;
  const Width widths[] = {Width::B8, Width::B16, Width::B32};
  if (name == "lb294") {
    for (int i = 1; i <= 7; ++i)
      for (int j = 1; j <= 7; ++j)
        for (Width w : widths)
          for (bool sg : {true, false})
            grid.push_back(PatternSpec{"LB", "rlx", w, sg, i, j});
    return grid;
  }
  if (name == "base210") {
    for (const char* shape : {"MP", "LB", "SB", "S", "R", "2+2W", "W+RR"})
      for (const char* scheme : {"rlx", "ra", "sc", "na", "rlx+scf"})
        for (Width w : widths)
          for (bool sg : {true, false})
            grid.push_back(PatternSpec{shape, scheme, w, sg, 0, 0});
    return grid;
  }
  throw Error(ErrorKind::BadConfig, "unknown preset grid: '" + name + "'");
}

std::vector<LitmusTest> generate_pattern_tests(const std::vector<PatternSpec>& grid) {
  std::vector<LitmusTest> tests;
  tests.reserve(grid.size());
  for (const auto& spec : grid) tests.push_back(build_test(spec));
  return tests;
}

}  // namespace lct::transforms
