// The three optimizations: unreachable code elimination, dead assignment
// elimination (single round and fixed point), the combined UCE+DAE pass, and
// constant propagation/folding. Each returns the transformed program, the
// source->target point map, and the analysis facts the certificate generators
// consume.
#pragma once

#include "tacc/dataflow.hpp"
#include "tacc/eval.hpp"
#include "tacc/ir.hpp"

namespace tacc {

// Constant-propagation lattice value for one variable.
struct ConstVal {
  enum class State { Undef, Known, Unknown };
  State state = State::Undef;
  Literal lit;  // meaningful only when Known

  static ConstVal undef() { return {}; }
  static ConstVal known(Literal l) { return ConstVal{State::Known, std::move(l)}; }
  static ConstVal unknown() { return ConstVal{State::Unknown, {}}; }

  bool is_known() const { return state == State::Known; }
  bool operator==(const ConstVal& o) const {
    if (state != o.state) return false;
    return state != State::Known || lit == o.lit;
  }
};

ConstVal join_constval(const ConstVal& a, const ConstVal& b);

// Absent key == Undef (not yet reached).
using ConstEnv = std::map<std::string, ConstVal>;
using VarSet = std::set<std::string>;

struct PassFacts {
  std::optional<std::set<size_t>> reachable;          // uce, uce_dae (source indices)
  std::optional<FactTable<VarSet>> live_after;        // dae*, uce_dae
  std::optional<FactTable<ConstEnv>> const_before;    // cp
  std::set<size_t> removed;                           // source indices dropped by the pass
};

struct PassResult {
  Program before;
  Program after;
  std::map<size_t, size_t> point_map;  // surviving source index -> target index
  PassFacts facts;
};

// Lattice specs, exposed so tests can cross-check both solver strategies.
LatticeSpec<VarSet> liveness_spec(const Program& p);
LatticeSpec<ConstEnv> const_spec(const Program& p);
// "Which variables hold equal values in source and target" given the set of
// removed (source) instructions; feeds the DAE certificate generator.
LatticeSpec<VarSet> equatable_spec(const Program& p, const std::set<size_t>& removed);

// Indices reachable from 0, via an explicit work stack.
std::set<size_t> reachable(const Program& p);

PassResult uce(const Program& p);

// Backward liveness; facts[i] is the live-after set. Boundary at exits is the
// output set plus every array name (arrays are never dead).
FactTable<VarSet> liveness(const Program& p);

PassResult dae_once(const Program& p);
PassResult dae_fixpoint(const Program& p);
PassResult uce_dae(const Program& p);

// Forward constant analysis; facts[i] is the environment before i.
FactTable<ConstEnv> cp_analyze(const Program& p);

// Substitutes Known variables with literals, folds all-literal pure ops to a
// Copy (nonzero-divisor guard), and rewrites resolved conditional branches to
// unconditional gotos. Never changes the instruction count.
Instruction fold_instr(const Instruction& ins, const ConstEnv& env,
                       const FoldQuirks* quirks = nullptr);

PassResult cp(const Program& p, const FoldQuirks* quirks = nullptr);

// Noop removal used by DAE's second stage: fall-through into a dropped noop
// flows to the next kept instruction, so this is deliberately not `retarget`.
PassResult strip_noops(const Program& p);

}  // namespace tacc
