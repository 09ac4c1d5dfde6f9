#include "tacc/simplify.hpp"

#include <sstream>

namespace tacc {

namespace {

ExprPtr node(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

bool is_lit(const ExprPtr& e) { return e->kind == ExprKind::Lit; }
bool is_bool_lit(const ExprPtr& e, bool v) {
  return is_lit(e) && e->lit.tag == TypeTag::Bool && e->lit.b == v;
}

bool commutative(BinOp op) {
  switch (op) {
    case BinOp::Add:
    case BinOp::Mul:
    case BinOp::And:
    case BinOp::Or:
    case BinOp::Eq:
    case BinOp::Ne:
      return true;
    default:
      return false;
  }
}

int rank(ExprKind k) { return static_cast<int>(k); }

}  // namespace

ExprPtr make_lit(Literal l) {
  Expr e;
  e.kind = ExprKind::Lit;
  e.type = l.tag;
  e.lit = std::move(l);
  return node(std::move(e));
}

ExprPtr make_sym(int id, TypeTag t) {
  Expr e;
  e.kind = ExprKind::Sym;
  e.type = t;
  e.sym = id;
  return node(std::move(e));
}

ExprPtr make_arr_sym(int id, TypeTag t, int64_t len) {
  Expr e;
  e.kind = ExprKind::ArrSym;
  e.type = t;
  e.sym = id;
  e.arr_len = len;
  return node(std::move(e));
}

ExprPtr make_arr_default(TypeTag t, int64_t len) {
  Expr e;
  e.kind = ExprKind::ArrDefault;
  e.type = t;
  e.arr_len = len;
  return node(std::move(e));
}

ExprPtr make_bin(BinOp op, ExprPtr a, ExprPtr b) {
  Expr e;
  e.kind = ExprKind::Bin;
  e.bop = op;
  e.type = is_comparison(op) || op == BinOp::And || op == BinOp::Or ? TypeTag::Bool : a->type;
  e.a = std::move(a);
  e.b = std::move(b);
  return node(std::move(e));
}

ExprPtr make_un(UnOp op, ExprPtr a) {
  Expr e;
  e.kind = ExprKind::Un;
  e.uop = op;
  e.type = op == UnOp::IntToFloat ? TypeTag::Float : (op == UnOp::Not ? TypeTag::Bool : a->type);
  e.a = std::move(a);
  return node(std::move(e));
}

ExprPtr make_select(ExprPtr arr, ExprPtr idx) {
  Expr e;
  e.kind = ExprKind::Select;
  e.type = elem_type(arr->type);
  e.a = std::move(arr);
  e.b = std::move(idx);
  return node(std::move(e));
}

ExprPtr make_store(ExprPtr arr, ExprPtr idx, ExprPtr val) {
  Expr e;
  e.kind = ExprKind::Store;
  e.type = arr->type;
  e.arr_len = arr->arr_len;
  e.a = std::move(arr);
  e.b = std::move(idx);
  e.c = std::move(val);
  return node(std::move(e));
}

int compare_exprs(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return rank(a->kind) < rank(b->kind) ? -1 : 1;
  if (a->type != b->type) return a->type < b->type ? -1 : 1;
  switch (a->kind) {
    case ExprKind::Lit:
      if (a->lit == b->lit) return 0;
      return a->lit < b->lit ? -1 : 1;
    case ExprKind::Sym:
    case ExprKind::ArrSym:
      if (a->sym != b->sym) return a->sym < b->sym ? -1 : 1;
      return 0;
    case ExprKind::ArrDefault:
      if (a->arr_len != b->arr_len) return a->arr_len < b->arr_len ? -1 : 1;
      return 0;
    case ExprKind::Bin: {
      if (a->bop != b->bop) return a->bop < b->bop ? -1 : 1;
      if (int c = compare_exprs(a->a, b->a)) return c;
      return compare_exprs(a->b, b->b);
    }
    case ExprKind::Un: {
      if (a->uop != b->uop) return a->uop < b->uop ? -1 : 1;
      return compare_exprs(a->a, b->a);
    }
    case ExprKind::Select: {
      if (int c = compare_exprs(a->a, b->a)) return c;
      return compare_exprs(a->b, b->b);
    }
    case ExprKind::Store: {
      if (int c = compare_exprs(a->a, b->a)) return c;
      if (int c = compare_exprs(a->b, b->b)) return c;
      return compare_exprs(a->c, b->c);
    }
  }
  return 0;
}

bool exprs_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a.get() == b.get()) return true;
  return compare_exprs(a, b) == 0;
}

std::string expr_text(const ExprPtr& e) {
  std::ostringstream os;
  switch (e->kind) {
    case ExprKind::Lit: os << literal_text(e->lit); break;
    case ExprKind::Sym: os << "s" << e->sym; break;
    case ExprKind::ArrSym: os << "arr" << e->sym; break;
    case ExprKind::ArrDefault: os << "zeros[" << e->arr_len << "]"; break;
    case ExprKind::Bin:
      os << "(" << expr_text(e->a) << " " << binop_text(e->bop) << " " << expr_text(e->b) << ")";
      break;
    case ExprKind::Un: os << "(" << unop_text(e->uop) << " " << expr_text(e->a) << ")"; break;
    case ExprKind::Select: os << expr_text(e->a) << "[" << expr_text(e->b) << "]"; break;
    case ExprKind::Store:
      os << expr_text(e->a) << "{" << expr_text(e->b) << ":=" << expr_text(e->c) << "}";
      break;
  }
  return os.str();
}

namespace {

// Int-only algebraic identities; float versions are unsound around NaN.
bool idempotent_safe(TypeTag t) { return t == TypeTag::Int || t == TypeTag::Bool; }

ExprPtr simplify_bin(BinOp op, ExprPtr a, ExprPtr b, const FoldQuirks* quirks) {
  if (is_lit(a) && is_lit(b)) {
    if (auto lit = fold_binop(op, a->lit, b->lit, quirks)) return make_lit(*lit);
  }
  if (commutative(op) && compare_exprs(b, a) < 0) std::swap(a, b);

  if (op == BinOp::And) {
    if (is_bool_lit(a, true)) return b;
    if (is_bool_lit(b, true)) return a;
    if (is_bool_lit(a, false) || is_bool_lit(b, false)) return make_lit(Literal::of_bool(false));
    if (exprs_equal(a, b)) return a;
  }
  if (op == BinOp::Or) {
    if (is_bool_lit(a, false)) return b;
    if (is_bool_lit(b, false)) return a;
    if (is_bool_lit(a, true) || is_bool_lit(b, true)) return make_lit(Literal::of_bool(true));
    if (exprs_equal(a, b)) return a;
  }
  if (exprs_equal(a, b) && idempotent_safe(a->type)) {
    switch (op) {
      case BinOp::Eq:
      case BinOp::Le:
      case BinOp::Ge:
        return make_lit(Literal::of_bool(true));
      case BinOp::Ne:
      case BinOp::Lt:
      case BinOp::Gt:
        return make_lit(Literal::of_bool(false));
      case BinOp::Sub:
        if (a->type == TypeTag::Int) return make_lit(Literal::of_int(0));
        break;
      default:
        break;
    }
  }
  return make_bin(op, std::move(a), std::move(b));
}

ExprPtr simplify_un(UnOp op, ExprPtr a) {
  if (is_lit(a)) return make_lit(eval_unop(op, a->lit));
  if (a->kind == ExprKind::Un && a->uop == op && (op == UnOp::Not || op == UnOp::Neg)) return a->a;
  return make_un(op, std::move(a));
}

ExprPtr simplify_select(ExprPtr arr, ExprPtr idx) {
  // Walk the store chain as long as indices are decidably equal or distinct.
  ExprPtr cur = arr;
  while (cur->kind == ExprKind::Store) {
    if (exprs_equal(cur->b, idx)) return cur->c;
    if (is_lit(cur->b) && is_lit(idx)) {
      cur = cur->a;  // distinct literal indices: the store cannot alias
      continue;
    }
    return make_select(std::move(cur), std::move(idx));
  }
  if (cur->kind == ExprKind::ArrDefault && is_lit(idx) && idx->lit.tag == TypeTag::Int &&
      idx->lit.i >= 0 && idx->lit.i < cur->arr_len) {
    return make_lit(Literal::zero_of(elem_type(cur->type)));
  }
  return make_select(std::move(cur), std::move(idx));
}

}  // namespace

ExprPtr simplify(const ExprPtr& e, const FoldQuirks* quirks) {
  switch (e->kind) {
    case ExprKind::Lit:
    case ExprKind::Sym:
    case ExprKind::ArrSym:
    case ExprKind::ArrDefault:
      return e;
    case ExprKind::Bin:
      return simplify_bin(e->bop, simplify(e->a, quirks), simplify(e->b, quirks), quirks);
    case ExprKind::Un:
      return simplify_un(e->uop, simplify(e->a, quirks));
    case ExprKind::Select:
      return simplify_select(simplify(e->a, quirks), simplify(e->b, quirks));
    case ExprKind::Store:
      return make_store(simplify(e->a, quirks), simplify(e->b, quirks), simplify(e->c, quirks));
  }
  return e;
}

}  // namespace tacc
