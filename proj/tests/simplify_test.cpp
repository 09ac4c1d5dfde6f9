#include "doctest.h"
#include "support/fixtures.hpp"
#include "tacc/interp.hpp"
#include "tacc/simplify.hpp"

using namespace tacc;

namespace {

ExprPtr lit_i(int64_t v) { return make_lit(Literal::of_int(v)); }
ExprPtr lit_b(bool v) { return make_lit(Literal::of_bool(v)); }

}  // namespace

TEST_CASE("simplify folds literal arithmetic and comparisons") {
  CHECK(exprs_equal(simplify(make_bin(BinOp::Add, lit_i(3), lit_i(4))), lit_i(7)));
  // The P4 branch-resolution obligation: 7 < 10 folds to true.
  CHECK(exprs_equal(simplify(make_bin(BinOp::Lt, lit_i(7), lit_i(10))), lit_b(true)));
  CHECK(exprs_equal(simplify(make_un(UnOp::Neg, lit_i(5))), lit_i(-5)));
}

TEST_CASE("simplify refuses to fold a faulting division") {
  ExprPtr e = simplify(make_bin(BinOp::Div, lit_i(1), lit_i(0)));
  CHECK(e->kind == ExprKind::Bin);  // left in place, fault preserved
}

TEST_CASE("boolean identities") {
  ExprPtr b = make_sym(0, TypeTag::Bool);
  CHECK(exprs_equal(simplify(make_un(UnOp::Not, make_un(UnOp::Not, b))), b));
  CHECK(exprs_equal(simplify(make_bin(BinOp::And, lit_b(true), b)), b));
  CHECK(exprs_equal(simplify(make_bin(BinOp::And, b, lit_b(false))), lit_b(false)));
  CHECK(exprs_equal(simplify(make_bin(BinOp::Or, lit_b(false), b)), b));
  CHECK(exprs_equal(simplify(make_bin(BinOp::Or, b, lit_b(true))), lit_b(true)));
}

TEST_CASE("identical int operands collapse under comparisons") {
  ExprPtr x = make_sym(1, TypeTag::Int);
  CHECK(exprs_equal(simplify(make_bin(BinOp::Eq, x, x)), lit_b(true)));
  CHECK(exprs_equal(simplify(make_bin(BinOp::Lt, x, x)), lit_b(false)));
  CHECK(exprs_equal(simplify(make_bin(BinOp::Sub, x, x)), lit_i(0)));
  // Floats stay symbolic: NaN breaks these identities.
  ExprPtr f = make_sym(2, TypeTag::Float);
  CHECK(simplify(make_bin(BinOp::Eq, f, f))->kind == ExprKind::Bin);
}

TEST_CASE("commutative operands are ordered canonically") {
  ExprPtr a = make_sym(3, TypeTag::Int);
  ExprPtr e1 = simplify(make_bin(BinOp::Add, a, lit_i(2)));
  ExprPtr e2 = simplify(make_bin(BinOp::Add, lit_i(2), a));
  CHECK(exprs_equal(e1, e2));
}

TEST_CASE("select resolves store chains with decidable indices") {
  ExprPtr arr = make_arr_sym(4, TypeTag::ArrInt, 8);
  ExprPtr stored = make_store(arr, lit_i(2), lit_i(99));
  CHECK(exprs_equal(simplify(make_select(stored, lit_i(2))), lit_i(99)));
  CHECK(simplify(make_select(stored, lit_i(1)))->kind == ExprKind::Select);
  // Symbolic index cannot see past the store.
  ExprPtr idx = make_sym(5, TypeTag::Int);
  CHECK(simplify(make_select(stored, idx))->kind == ExprKind::Select);
  // Shared symbolic index does resolve.
  ExprPtr stored_sym = make_store(arr, idx, lit_i(7));
  CHECK(exprs_equal(simplify(make_select(stored_sym, idx)), lit_i(7)));
  // Default arrays read zero in range.
  CHECK(exprs_equal(simplify(make_select(make_arr_default(TypeTag::ArrInt, 4), lit_i(3))), lit_i(0)));
}

namespace {

ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  auto lit = [&]() -> ExprPtr {
    switch (rng() % 3) {
      case 0: return lit_i(static_cast<int64_t>(rng() % 41) - 20);
      case 1: return make_lit(Literal::of_float(static_cast<double>(rng() % 64) / 4.0 - 5.0));
      default: return lit_b(rng() % 2 == 0);
    }
  };
  if (depth == 0 || rng() % 3 == 0) return lit();
  ExprPtr a = random_expr(rng, depth - 1);
  if (rng() % 4 == 0) {
    if (a->type == TypeTag::Bool) return make_un(UnOp::Not, a);
    if (a->type == TypeTag::Int && rng() % 2 == 0) return make_un(UnOp::IntToFloat, a);
    return make_un(UnOp::Neg, a);
  }
  ExprPtr b = random_expr(rng, depth - 1);
  std::vector<BinOp> ops;
  if (a->type == TypeTag::Bool && b->type == TypeTag::Bool)
    ops = {BinOp::And, BinOp::Or, BinOp::Eq, BinOp::Ne};
  else if (a->type == b->type && a->type != TypeTag::Bool)
    ops = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod,
           BinOp::Lt,  BinOp::Le,  BinOp::Gt,  BinOp::Ge,  BinOp::Eq, BinOp::Ne};
  else
    return a;
  return make_bin(ops[rng() % ops.size()], a, b);
}

}  // namespace

TEST_CASE("simplify is idempotent") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 500; ++k) {
    ExprPtr e = random_expr(rng, 4);
    ExprPtr once = simplify(e);
    CHECK(exprs_equal(once, simplify(once)));
  }
}

TEST_CASE("folding agrees with the interpreter on literal operations") {
  std::mt19937_64 rng(32);
  for (int k = 0; k < 500; ++k) {
    Literal a = rng() % 2 ? Literal::of_int(static_cast<int64_t>(rng() % 21) - 10)
                          : Literal::of_float(static_cast<double>(rng() % 40) / 4.0 - 4.0);
    Literal b = a.tag == TypeTag::Int ? Literal::of_int(static_cast<int64_t>(rng() % 21) - 10)
                                      : Literal::of_float(static_cast<double>(rng() % 40) / 4.0 - 4.0);
    static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod,
                                BinOp::Lt,  BinOp::Le,  BinOp::Gt,  BinOp::Ge,  BinOp::Eq,
                                BinOp::Ne};
    BinOp op = ops[rng() % 11];
    TypeTag out = is_comparison(op) ? TypeTag::Bool : a.tag;

    Program p = fixtures::make({{"r", out, 0, false}}, {"r"},
                               {BinAssign{"r", op, lit_operand(a), lit_operand(b)}, Halt{}});
    auto o = run(p, {}, 4);
    REQUIRE(o.ok());
    ExprPtr folded = simplify(make_bin(op, make_lit(a), make_lit(b)));
    if (std::holds_alternative<Halted>(*o)) {
      REQUIRE(folded->kind == ExprKind::Lit);
      CHECK(folded->lit == std::get<Literal>(std::get<Halted>(*o).outputs[0].second));
    } else {
      // Interpreter faulted, so the fold must have been refused.
      CHECK(folded->kind == ExprKind::Bin);
    }
  }
}
