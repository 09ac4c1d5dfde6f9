// Three-address-code program representation and structural queries.
//
// Programs are flat indexed instruction sequences (no basic blocks); entry is
// instruction 0 and every path must end in `halt` or a branch. All values are
// immutable after construction and every operation here is a pure function.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "tacc/common.hpp"

namespace tacc {

enum class TypeTag { Int, Float, Bool, ArrInt, ArrFloat, ArrBool };

bool is_scalar(TypeTag t);
bool is_array(TypeTag t);
TypeTag elem_type(TypeTag array_tag);
TypeTag array_of(TypeTag scalar_tag);
std::string type_name(TypeTag t);

// A typed scalar constant. Floats compare bitwise so NaN == NaN and
// -0.0 != +0.0; this keeps certificates, folding and outcome comparison
// deterministic.
struct Literal {
  TypeTag tag = TypeTag::Int;
  int64_t i = 0;
  double f = 0.0;
  bool b = false;

  static Literal of_int(int64_t v) { return Literal{TypeTag::Int, v, 0.0, false}; }
  static Literal of_float(double v) { return Literal{TypeTag::Float, 0, v, false}; }
  static Literal of_bool(bool v) { return Literal{TypeTag::Bool, 0, 0.0, v}; }
  static Literal zero_of(TypeTag scalar_tag);

  bool operator==(const Literal& o) const;
  bool operator!=(const Literal& o) const { return !(*this == o); }
  bool operator<(const Literal& o) const;
};

std::string literal_text(const Literal& l);

struct VarRef {
  std::string name;
  bool operator==(const VarRef&) const = default;
};

using Operand = std::variant<VarRef, Literal>;

bool is_var(const Operand& o);
const std::string* var_of(const Operand& o);  // nullptr for literals
Operand var_operand(std::string name);
Operand lit_operand(Literal l);

enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnOp { Neg, Not, IntToFloat };

bool is_comparison(BinOp op);
std::string binop_text(BinOp op);
std::string unop_text(UnOp op);

// Branch condition: either a bare boolean operand or an inline comparison of
// two operands (`if y < 10 goto 4 else 3`).
struct BranchCond {
  std::optional<BinOp> cmp;  // comparison op when the condition is inline
  Operand a = Literal::of_bool(false);
  Operand b = Literal::of_bool(false);  // ignored unless cmp is set

  static BranchCond bare(Operand o) { return BranchCond{std::nullopt, std::move(o), Literal::of_bool(false)}; }
  static BranchCond compare(BinOp op, Operand lhs, Operand rhs) {
    return BranchCond{op, std::move(lhs), std::move(rhs)};
  }
  bool operator==(const BranchCond&) const = default;
};

struct Copy {
  std::string dst;
  Operand src;
  bool operator==(const Copy&) const = default;
};
struct BinAssign {
  std::string dst;
  BinOp op;
  Operand a, b;
  bool operator==(const BinAssign&) const = default;
};
struct UnAssign {
  std::string dst;
  UnOp op;
  Operand a;
  bool operator==(const UnAssign&) const = default;
};
struct ArrLoad {
  std::string dst;
  std::string arr;
  Operand idx;
  bool operator==(const ArrLoad&) const = default;
};
struct ArrStore {
  std::string arr;
  Operand idx;
  Operand src;
  bool operator==(const ArrStore&) const = default;
};
struct Goto {
  size_t target;
  bool operator==(const Goto&) const = default;
};
struct CondGoto {
  BranchCond cond;
  size_t t_true;
  size_t t_false;
  bool operator==(const CondGoto&) const = default;
};
struct Halt {
  bool operator==(const Halt&) const = default;
};
struct Noop {
  bool operator==(const Noop&) const = default;
};

using Instruction =
    std::variant<Copy, BinAssign, UnAssign, ArrLoad, ArrStore, Goto, CondGoto, Halt, Noop>;

struct VarInfo {
  std::string name;
  TypeTag type = TypeTag::Int;
  int64_t array_len = 0;  // positive iff type is an array tag
  bool is_input = false;
  bool operator==(const VarInfo&) const = default;
};

// `vars` keeps declaration order; `outputs` is the observation order used by
// the interpreter's halt snapshot.
struct Program {
  std::vector<Instruction> instrs;
  std::vector<VarInfo> vars;
  std::vector<std::string> outputs;

  size_t n() const { return instrs.size(); }
  const VarInfo* find_var(std::string_view name) const;
  bool is_output(std::string_view name) const;

  void add_var(VarInfo v);
  bool operator==(const Program& o) const {
    return instrs == o.instrs && vars == o.vars && outputs == o.outputs;
  }

 private:
  std::unordered_map<std::string, size_t> var_index_;
};

// Structural queries ---------------------------------------------------------

// Empty result means every invariant holds; each violation names the
// offending index or field.
std::vector<std::string> validate(const Program& p);

// Goto -> {target}; CondGoto -> {tTrue, tFalse} deduplicated; Halt -> {};
// everything else falls through to {i+1}. A final fall-through instruction is
// a validation violation, not an error here.
std::vector<size_t> successors(const Program& p, size_t i);

std::vector<std::vector<size_t>> predecessors(const Program& p);

struct DefsUses {
  std::optional<std::string> def;          // scalar written, if any
  std::vector<std::string> uses;           // sorted, unique; array reads include the array name
  std::optional<std::string> array_written;
};

DefsUses defs_uses(const Instruction& ins);

bool is_branch(const Instruction& ins);
bool is_pure_assign(const Instruction& ins);  // Copy/BinAssign/UnAssign

struct Retargeted {
  Program program;
  std::map<size_t, size_t> index_map;  // old index -> new index, over `keep`
};

// Keeps exactly `keep` (which must contain 0 and be closed under successors,
// fall-through included) in original order and remaps all targets.
Result<Retargeted> retarget(const Program& p, const std::set<size_t>& keep);

}  // namespace tacc
