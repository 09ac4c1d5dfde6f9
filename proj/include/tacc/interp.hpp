// Fuel-bounded small-step reference semantics. This is the oracle every pass
// is tested against: equivalence means same termination class and same values
// for the declared outputs (fault indices are not compared, since passes
// renumber instructions).
#pragma once

#include <map>
#include <variant>

#include "tacc/eval.hpp"
#include "tacc/ir.hpp"

namespace tacc {

struct ArrayVal {
  TypeTag elem = TypeTag::Int;
  std::vector<Literal> elems;
  bool operator==(const ArrayVal&) const = default;
};

using Value = std::variant<Literal, ArrayVal>;

bool value_matches(const VarInfo& vi, const Value& v);
Value default_value(const VarInfo& vi);
std::string value_text(const Value& v);

struct Store {
  std::vector<Value> slots;  // indexed by declaration order
  size_t pc = 0;
  const Program* prog = nullptr;

  const Value& get(std::string_view name) const;
  void set(std::string_view name, Value v);
};

struct Halted {
  std::vector<std::pair<std::string, Value>> outputs;  // in Program.outputs order
  bool operator==(const Halted&) const = default;
};
struct Fault {
  FaultKind kind;
  size_t at;
};
struct OutOfFuel {};

using Outcome = std::variant<Halted, Fault, OutOfFuel>;

// Equivalence used by differential tests: Halted outputs bitwise, Fault by
// kind only, OutOfFuel == OutOfFuel.
bool outcomes_equal(const Outcome& a, const Outcome& b);
std::string outcome_text(const Outcome& o);

using Inputs = std::map<std::string, Value>;

// Non-input scalars default to 0 / 0.0 / false; arrays are zero-filled.
// Rejects missing, extra or ill-typed inputs, naming the offender.
Result<Store> init_store(const Program& p, const Inputs& inputs);

// One instruction. Precondition: s.pc < p.n() and s belongs to p.
std::variant<Store, Outcome> step(const Program& p, const Store& s);

constexpr size_t kDefaultFuel = 1'000'000;

Result<Outcome> run(const Program& p, const Inputs& inputs, size_t fuel);

}  // namespace tacc
