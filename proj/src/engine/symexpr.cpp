#include "lct/engine/symexpr.hpp"

#include <sstream>

namespace lct::engine {

using litmus::Value;
using litmus::Width;

namespace {

SymPtr node(SymExpr e) { return std::make_shared<SymExpr>(std::move(e)); }

SymPtr make_const(Value v) {
  SymExpr e;
  e.op = SymExpr::Op::Const;
  e.k = v;
  e.width = v.width;
  e.is_signed = v.is_signed;
  return node(std::move(e));
}

// Wider operand decides the arithmetic width.
Width join_width(Width a, Width b) { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

Value apply_binop(SymExpr::Op op, const Value& va, const Value& vb, Width w, bool sign) {
  switch (op) {
    case SymExpr::Op::Add:
      return Value::integer(static_cast<int64_t>(va.canonical() + vb.canonical()), w, sign);
    case SymExpr::Op::Sub:
      return Value::integer(static_cast<int64_t>(va.canonical() - vb.canonical()), w, sign);
    case SymExpr::Op::Xor:
      return Value::integer(static_cast<int64_t>(va.canonical() ^ vb.canonical()), w, sign);
    case SymExpr::Op::Eq:
      return Value::integer(va == vb ? 1 : 0, Width::B32, true);
    default:
      return Value::integer(0);
  }
}

SymPtr binop(SymExpr::Op op, SymPtr a, SymPtr b) {
  auto ca = sym_const_value(a);
  auto cb = sym_const_value(b);
  Width w = op == SymExpr::Op::Eq ? Width::B32 : join_width(a->width, b->width);
  bool sign = op == SymExpr::Op::Eq ? true : (a->is_signed && b->is_signed);

  if (ca && cb && !(op != SymExpr::Op::Eq && (ca->is_address() || cb->is_address())))
    return make_const(apply_binop(op, *ca, *cb, w, sign));

  // Structural folds: x==x -> 1, x^x -> 0, x-x -> 0, x+0 -> x.
  if (sym_equal(a, b)) {
    if (op == SymExpr::Op::Eq) return make_const(Value::integer(1, Width::B32, true));
    if (op == SymExpr::Op::Xor || op == SymExpr::Op::Sub)
      return make_const(Value::integer(0, w, sign));
  }
  if (op == SymExpr::Op::Add) {
    if (ca && !ca->is_address() && ca->canonical() == 0) return b;
    if (cb && !cb->is_address() && cb->canonical() == 0) return a;
  }
  if (op == SymExpr::Op::Sub && cb && !cb->is_address() && cb->canonical() == 0) return a;

  SymExpr e;
  e.op = op;
  e.a = std::move(a);
  e.b = std::move(b);
  e.width = w;
  e.is_signed = sign;
  return node(std::move(e));
}

}  // namespace

SymPtr sym_const(Value v) { return make_const(v); }

SymPtr sym_read(int slot, Width w, bool is_signed) {
  SymExpr e;
  e.op = SymExpr::Op::Read;
  e.read_slot = slot;
  e.width = w;
  e.is_signed = is_signed;
  return node(std::move(e));
}

SymPtr sym_add(SymPtr a, SymPtr b) { return binop(SymExpr::Op::Add, std::move(a), std::move(b)); }
SymPtr sym_sub(SymPtr a, SymPtr b) { return binop(SymExpr::Op::Sub, std::move(a), std::move(b)); }
SymPtr sym_eq(SymPtr a, SymPtr b) { return binop(SymExpr::Op::Eq, std::move(a), std::move(b)); }
SymPtr sym_xor(SymPtr a, SymPtr b) { return binop(SymExpr::Op::Xor, std::move(a), std::move(b)); }

SymPtr sym_conv(SymPtr a, Width w, bool is_signed) {
  if (a->width == w && a->is_signed == is_signed) return a;
  if (auto c = sym_const_value(a)) {
    if (c->is_address()) return a;  // addresses are width-immune
    return make_const(c->narrowed(w, is_signed));
  }
  SymExpr e;
  e.op = SymExpr::Op::Conv;
  e.a = std::move(a);
  e.width = w;
  e.is_signed = is_signed;
  return node(std::move(e));
}

SymPtr sym_lo12(SymPtr a, std::string sym) {
  if (auto c = sym_const_value(a); c && c->is_address() && *c->addr == sym) return a;
  SymExpr e;
  e.op = SymExpr::Op::Lo12;
  e.a = std::move(a);
  e.sym = std::move(sym);
  e.width = Width::B64;
  e.is_signed = false;
  return node(std::move(e));
}

bool sym_equal(const SymPtr& a, const SymPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->op != b->op || a->width != b->width || a->is_signed != b->is_signed) return false;
  switch (a->op) {
    case SymExpr::Op::Const: return a->k == b->k;
    case SymExpr::Op::Read: return a->read_slot == b->read_slot;
    case SymExpr::Op::Conv: return sym_equal(a->a, b->a);
    case SymExpr::Op::Lo12: return a->sym == b->sym && sym_equal(a->a, b->a);
    default: return sym_equal(a->a, b->a) && sym_equal(a->b, b->b);
  }
}

std::optional<Value> sym_const_value(const SymPtr& e) {
  if (e && e->op == SymExpr::Op::Const) return e->k;
  return std::nullopt;
}

std::optional<Value> sym_eval(const SymPtr& e,
                              const std::function<std::optional<Value>(int)>& read_value) {
  if (!e) return std::nullopt;
  switch (e->op) {
    case SymExpr::Op::Const:
      return e->k;
    case SymExpr::Op::Read: {
      auto v = read_value(e->read_slot);
      if (!v) return std::nullopt;
      if (v->is_address()) return v;
      return v->narrowed(e->width, e->is_signed);
    }
    case SymExpr::Op::Conv: {
      auto v = sym_eval(e->a, read_value);
      if (!v) return std::nullopt;
      if (v->is_address()) return v;
      return v->narrowed(e->width, e->is_signed);
    }
    case SymExpr::Op::Lo12: {
      auto v = sym_eval(e->a, read_value);
      if (!v || !v->is_address() || *v->addr != e->sym) return std::nullopt;
      return v;
    }
    default: {
      auto va = sym_eval(e->a, read_value);
      auto vb = sym_eval(e->b, read_value);
      if (!va || !vb) return std::nullopt;
      if (e->op != SymExpr::Op::Eq && (va->is_address() || vb->is_address()))
        return std::nullopt;  // no pointer arithmetic
      return apply_binop(e->op, *va, *vb, e->width, e->is_signed);
    }
  }
}

void sym_reads(const SymPtr& e, std::set<int>& out) {
  if (!e) return;
  if (e->op == SymExpr::Op::Read) {
    out.insert(e->read_slot);
    return;
  }
  sym_reads(e->a, out);
  sym_reads(e->b, out);
}

std::string sym_str(const SymPtr& e) {
  if (!e) return "<null>";
  std::ostringstream out;
  switch (e->op) {
    case SymExpr::Op::Const: out << e->k.str(); break;
    case SymExpr::Op::Read: out << "$" << e->read_slot; break;
    case SymExpr::Op::Add: out << "(" << sym_str(e->a) << " + " << sym_str(e->b) << ")"; break;
    case SymExpr::Op::Sub: out << "(" << sym_str(e->a) << " - " << sym_str(e->b) << ")"; break;
    case SymExpr::Op::Eq: out << "(" << sym_str(e->a) << " == " << sym_str(e->b) << ")"; break;
    case SymExpr::Op::Xor: out << "(" << sym_str(e->a) << " ^ " << sym_str(e->b) << ")"; break;
    case SymExpr::Op::Conv:
      out << "conv" << static_cast<int>(e->width) << "(" << sym_str(e->a) << ")";
      break;
    case SymExpr::Op::Lo12: out << "lo12:" << e->sym << "(" << sym_str(e->a) << ")"; break;
  }
  return out.str();
}

}  // namespace lct::engine
