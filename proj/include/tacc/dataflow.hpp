// Generic forward/backward dataflow solver in two interchangeable strategies:
// a FIFO worklist and a round-robin full sweep. Both compute the least fixed
// point of the same lattice spec, so strategy equivalence doubles as a
// built-in oracle for each analysis.
//
// Fact placement: for forward analyses facts[i] is the fact holding *before*
// instruction i; for backward analyses it is the fact holding *after* it (the
// join side in both cases). Backward boundary facts attach to Halt
// instructions, the only exit points of a valid program.
#pragma once

#include <deque>
#include <functional>

#include "tacc/ir.hpp"

namespace tacc {

enum class Direction { Forward, Backward };

template <typename Fact>
struct LatticeSpec {
  Direction direction = Direction::Forward;
  Fact bottom;
  Fact boundary;
  std::function<Fact(const Fact&, const Fact&)> join;
  std::function<bool(const Fact&, const Fact&)> eq;
  std::function<Fact(const Program&, size_t, const Fact&)> transfer;
  // Optional edge filter (constant propagation prunes the not-taken arm of a
  // resolved branch). Arguments: program, from-index, from's out-fact, to.
  std::function<bool(const Program&, size_t, const Fact&, size_t)> edge_feasible;
  // Divergence guard; 0 means 2 * vars + 4, which covers both bundled
  // lattices (the constant lattice climbs Undef -> Known -> Unknown per var).
  size_t height_bound = 0;
};

template <typename Fact>
using FactTable = std::vector<Fact>;

namespace detail {

// Each fact can strictly climb `height` times and every change re-queues up
// to two dependents (instructions have at most two successors), so a monotone
// transfer stays within 2 * N * height pops; anything past the limit signals
// a non-monotone transfer.
template <typename Fact>
size_t guard_limit(const Program& p, const LatticeSpec<Fact>& spec) {
  size_t height = spec.height_bound ? spec.height_bound : 2 * p.vars.size() + 4;
  return p.n() * (2 * height + 4) + 16;
}

template <typename Fact>
bool edge_ok(const LatticeSpec<Fact>& spec, const Program& p, size_t from, const Fact& out,
             size_t to) {
  return !spec.edge_feasible || spec.edge_feasible(p, from, out, to);
}

}  // namespace detail

// One recomputation of facts[i] from its current neighbours. Used by both
// strategies and by the fixed-point check in tests.
template <typename Fact>
Fact recompute_fact(const Program& p, const LatticeSpec<Fact>& spec,
                    const std::vector<std::vector<size_t>>& preds, const FactTable<Fact>& facts,
                    size_t i) {
  Fact acc = spec.bottom;
  if (spec.direction == Direction::Forward) {
    if (i == 0) acc = spec.join(acc, spec.boundary);
    for (size_t pr : preds[i]) {
      Fact out = spec.transfer(p, pr, facts[pr]);
      if (detail::edge_ok(spec, p, pr, out, i)) acc = spec.join(acc, out);
    }
  } else {
    auto succ = successors(p, i);
    if (succ.empty()) acc = spec.join(acc, spec.boundary);
    for (size_t s : succ) acc = spec.join(acc, spec.transfer(p, s, facts[s]));
  }
  return acc;
}

// Least fixed point via FIFO worklist with a membership set (no duplicate
// queue entries); deterministic processing order. Fails with a diagnostic if
// the divergence guard trips, which signals a non-monotone transfer.
template <typename Fact>
Result<FactTable<Fact>> solve_worklist(const Program& p, const LatticeSpec<Fact>& spec) {
  const size_t n = p.n();
  auto preds = predecessors(p);
  FactTable<Fact> facts(n, spec.bottom);

  std::deque<size_t> queue;
  std::vector<bool> queued(n, true);
  for (size_t i = 0; i < n; ++i) queue.push_back(i);

  const size_t limit = detail::guard_limit(p, spec);
  size_t pops = 0;
  while (!queue.empty()) {
    if (++pops > limit)
      return Result<FactTable<Fact>>::failure(
          "worklist exceeded " + std::to_string(limit) + " iterations; transfer is not monotone?");
    size_t i = queue.front();
    queue.pop_front();
    queued[i] = false;

    Fact updated = recompute_fact(p, spec, preds, facts, i);
    if (spec.eq(updated, facts[i])) continue;
    facts[i] = std::move(updated);

    // Re-queue whoever consumes facts[i]: successors for forward analyses,
    // predecessors for backward ones.
    std::vector<size_t> dependents =
        spec.direction == Direction::Forward ? successors(p, i) : preds[i];
    for (size_t s : dependents) {
      if (!queued[s]) {
        queued[s] = true;
        queue.push_back(s);
      }
    }
  }
  return Result<FactTable<Fact>>::success(std::move(facts));
}

// Same contract, computed by sweeping all indices until a sweep changes
// nothing (the fixed-point check is the sweep itself).
template <typename Fact>
Result<FactTable<Fact>> solve_roundrobin(const Program& p, const LatticeSpec<Fact>& spec) {
  const size_t n = p.n();
  auto preds = predecessors(p);
  FactTable<Fact> facts(n, spec.bottom);

  const size_t limit = detail::guard_limit(p, spec);
  size_t sweeps = 0;
  bool changed = true;
  while (changed) {
    if (++sweeps > limit)
      return Result<FactTable<Fact>>::failure(
          "round-robin exceeded " + std::to_string(limit) + " sweeps; transfer is not monotone?");
    changed = false;
    for (size_t k = 0; k < n; ++k) {
      size_t i = spec.direction == Direction::Forward ? k : n - 1 - k;
      Fact updated = recompute_fact(p, spec, preds, facts, i);
      if (!spec.eq(updated, facts[i])) {
        facts[i] = std::move(updated);
        changed = true;
      }
    }
  }
  return Result<FactTable<Fact>>::success(std::move(facts));
}

// True when one more full sweep leaves the table unchanged.
template <typename Fact>
bool is_fixed_point(const Program& p, const LatticeSpec<Fact>& spec, const FactTable<Fact>& facts) {
  auto preds = predecessors(p);
  for (size_t i = 0; i < p.n(); ++i) {
    if (!spec.eq(recompute_fact(p, spec, preds, facts, i), facts[i])) return false;
  }
  return true;
}

}  // namespace tacc
