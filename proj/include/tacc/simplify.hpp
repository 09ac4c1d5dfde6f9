// Symbolic expressions for the certificate checker: literals, shared symbols,
// instruction operators, and array select/store chains, with a normalizing
// simplifier whose constant folding matches the interpreter exactly.
#pragma once

#include <memory>

#include "tacc/eval.hpp"
#include "tacc/ir.hpp"

namespace tacc {

enum class ExprKind { Lit, Sym, ArrSym, ArrDefault, Bin, Un, Select, Store };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  ExprKind kind = ExprKind::Lit;
  TypeTag type = TypeTag::Int;  // scalar type, or array tag for array-valued nodes
  Literal lit;                  // Lit
  int sym = -1;                 // Sym / ArrSym
  BinOp bop = BinOp::Add;
  UnOp uop = UnOp::Neg;
  int64_t arr_len = 0;          // ArrSym / ArrDefault
  ExprPtr a, b, c;              // Bin(a,b)  Un(a)  Select(a=arr,b=idx)  Store(a=arr,b=idx,c=val)
};

ExprPtr make_lit(Literal l);
ExprPtr make_sym(int id, TypeTag scalar_type);
ExprPtr make_arr_sym(int id, TypeTag array_type, int64_t len);
ExprPtr make_arr_default(TypeTag array_type, int64_t len);
ExprPtr make_bin(BinOp op, ExprPtr a, ExprPtr b);
ExprPtr make_un(UnOp op, ExprPtr a);
ExprPtr make_select(ExprPtr arr, ExprPtr idx);
ExprPtr make_store(ExprPtr arr, ExprPtr idx, ExprPtr val);

bool exprs_equal(const ExprPtr& a, const ExprPtr& b);
int compare_exprs(const ExprPtr& a, const ExprPtr& b);  // total order for canonicalization
std::string expr_text(const ExprPtr& e);                // for diagnostics

// Normal form: folds all-literal subterms (same wrapping/IEEE rules as the
// interpreter, nonzero-divisor guard), orders commutative operands, applies
// not(not x) -> x, and(true,x) -> x and duals, x==x -> true for Int/Bool, and
// resolves literal-index select-of-store chains. Idempotent.
ExprPtr simplify(const ExprPtr& e, const FoldQuirks* quirks = nullptr);

}  // namespace tacc
