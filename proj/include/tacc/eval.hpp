// Scalar operator semantics shared by the interpreter, constant folding and
// the certificate checker's simplifier. Integers wrap (two's complement),
// floats follow binary64, div/mod by zero faults for both types.
#pragma once

#include <optional>
#include <variant>

#include "tacc/ir.hpp"

namespace tacc {

enum class FaultKind { DivByZero, ModByZero, OutOfBounds };

std::string fault_name(FaultKind k);

using EvalResult = std::variant<Literal, FaultKind>;

EvalResult eval_binop(BinOp op, const Literal& a, const Literal& b);
Literal eval_unop(UnOp op, const Literal& a);

// Test hooks for deliberately-broken folding; the interpreter never sees
// these, so differential runs can expose a fold/checker bug they share.
struct FoldQuirks {
  bool div_by_zero_folds_to_zero = false;
};

// Folding wrapper: returns the folded literal, or nullopt when evaluation
// would fault (the fold is refused and the instruction left in place).
std::optional<Literal> fold_binop(BinOp op, const Literal& a, const Literal& b,
                                  const FoldQuirks* quirks = nullptr);

}  // namespace tacc
