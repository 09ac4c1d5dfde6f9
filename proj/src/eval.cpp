#include "tacc/eval.hpp"

#include <cmath>
#include <limits>

namespace tacc {

std::string fault_name(FaultKind k) {
  switch (k) {
    case FaultKind::DivByZero: return "DivByZero";
    case FaultKind::ModByZero: return "ModByZero";
    case FaultKind::OutOfBounds: return "OutOfBounds";
  }
  return "?";
}

namespace {

int64_t wrap_add(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) + static_cast<uint64_t>(b));
}
int64_t wrap_sub(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) - static_cast<uint64_t>(b));
}
int64_t wrap_mul(int64_t a, int64_t b) {
  return static_cast<int64_t>(static_cast<uint64_t>(a) * static_cast<uint64_t>(b));
}

// INT64_MIN / -1 wraps; INT64_MIN % -1 is 0. Division truncates toward zero.
int64_t wrap_div(int64_t a, int64_t b) {
  if (a == std::numeric_limits<int64_t>::min() && b == -1) return a;
  return a / b;
}
int64_t wrap_mod(int64_t a, int64_t b) {
  if (a == std::numeric_limits<int64_t>::min() && b == -1) return 0;
  return a % b;
}

}  // namespace

EvalResult eval_binop(BinOp op, const Literal& a, const Literal& b) {
  if (a.tag == TypeTag::Int && b.tag == TypeTag::Int) {
    switch (op) {
      case BinOp::Add: return Literal::of_int(wrap_add(a.i, b.i));
      case BinOp::Sub: return Literal::of_int(wrap_sub(a.i, b.i));
      case BinOp::Mul: return Literal::of_int(wrap_mul(a.i, b.i));
      case BinOp::Div:
        if (b.i == 0) return FaultKind::DivByZero;
        return Literal::of_int(wrap_div(a.i, b.i));
      case BinOp::Mod:
        if (b.i == 0) return FaultKind::ModByZero;
        return Literal::of_int(wrap_mod(a.i, b.i));
      case BinOp::Lt: return Literal::of_bool(a.i < b.i);
      case BinOp::Le: return Literal::of_bool(a.i <= b.i);
      case BinOp::Gt: return Literal::of_bool(a.i > b.i);
      case BinOp::Ge: return Literal::of_bool(a.i >= b.i);
      case BinOp::Eq: return Literal::of_bool(a.i == b.i);
      case BinOp::Ne: return Literal::of_bool(a.i != b.i);
      default: break;
    }
  }
  if (a.tag == TypeTag::Float && b.tag == TypeTag::Float) {
    // IEEE comparisons: anything with NaN is false, except !=.
    switch (op) {
      case BinOp::Add: return Literal::of_float(a.f + b.f);
      case BinOp::Sub: return Literal::of_float(a.f - b.f);
      case BinOp::Mul: return Literal::of_float(a.f * b.f);
      case BinOp::Div:
        if (b.f == 0.0) return FaultKind::DivByZero;
        return Literal::of_float(a.f / b.f);
      case BinOp::Mod:
        if (b.f == 0.0) return FaultKind::ModByZero;
        return Literal::of_float(std::fmod(a.f, b.f));
      case BinOp::Lt: return Literal::of_bool(a.f < b.f);
      case BinOp::Le: return Literal::of_bool(a.f <= b.f);
      case BinOp::Gt: return Literal::of_bool(a.f > b.f);
      case BinOp::Ge: return Literal::of_bool(a.f >= b.f);
      case BinOp::Eq: return Literal::of_bool(a.f == b.f);
      case BinOp::Ne: return Literal::of_bool(a.f != b.f);
      default: break;
    }
  }
  if (a.tag == TypeTag::Bool && b.tag == TypeTag::Bool) {
    switch (op) {
      case BinOp::And: return Literal::of_bool(a.b && b.b);
      case BinOp::Or: return Literal::of_bool(a.b || b.b);
      case BinOp::Eq: return Literal::of_bool(a.b == b.b);
      case BinOp::Ne: return Literal::of_bool(a.b != b.b);
      default: break;
    }
  }
  // Unreachable on validated programs; harmless default keeps eval total.
  return Literal::zero_of(a.tag);
}

Literal eval_unop(UnOp op, const Literal& a) {
  switch (op) {
    case UnOp::Neg:
      if (a.tag == TypeTag::Float) return Literal::of_float(-a.f);
      return Literal::of_int(wrap_sub(0, a.i));
    case UnOp::Not:
      return Literal::of_bool(!a.b);
    case UnOp::IntToFloat:
      return Literal::of_float(static_cast<double>(a.i));
  }
  return a;
}

std::optional<Literal> fold_binop(BinOp op, const Literal& a, const Literal& b,
                                  const FoldQuirks* quirks) {
  EvalResult r = eval_binop(op, a, b);
  if (auto* lit = std::get_if<Literal>(&r)) return *lit;
  if (quirks && quirks->div_by_zero_folds_to_zero) return Literal::zero_of(a.tag);
  return std::nullopt;
}

}  // namespace tacc
