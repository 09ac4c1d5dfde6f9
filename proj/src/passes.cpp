#include "tacc/passes.hpp"

#include <algorithm>
#include <cassert>
#include <memory>
#include <stdexcept>

namespace tacc {

ConstVal join_constval(const ConstVal& a, const ConstVal& b) {
  using S = ConstVal::State;
  if (a.state == S::Undef) return b;
  if (b.state == S::Undef) return a;
  if (a.state == S::Unknown || b.state == S::Unknown) return ConstVal::unknown();
  if (a.lit == b.lit) return a;
  return ConstVal::unknown();
}

namespace {

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet r = a;
  r.insert(b.begin(), b.end());
  return r;
}

VarSet set_intersect(const VarSet& a, const VarSet& b) {
  VarSet r;
  for (const auto& x : a) {
    if (b.count(x)) r.insert(x);
  }
  return r;
}

VarSet all_var_names(const Program& p) {
  VarSet s;
  for (const VarInfo& v : p.vars) s.insert(v.name);
  return s;
}

ConstEnv normalize(ConstEnv env) {
  for (auto it = env.begin(); it != env.end();) {
    if (it->second.state == ConstVal::State::Undef) it = env.erase(it);
    else ++it;
  }
  return env;
}

ConstVal lookup(const ConstEnv& env, const std::string& name) {
  auto it = env.find(name);
  return it == env.end() ? ConstVal::undef() : it->second;
}

ConstVal operand_const(const ConstEnv& env, const Operand& o) {
  if (auto* name = var_of(o)) return lookup(env, *name);
  return ConstVal::known(std::get<Literal>(o));
}

ConstVal apply_binop(BinOp op, const ConstVal& a, const ConstVal& b) {
  using S = ConstVal::State;
  if (a.state == S::Undef || b.state == S::Undef) return ConstVal::undef();
  if (a.state == S::Unknown || b.state == S::Unknown) return ConstVal::unknown();
  if (auto lit = fold_binop(op, a.lit, b.lit)) return ConstVal::known(*lit);
  return ConstVal::unknown();  // fold refused (div/mod by zero); fault preserved at runtime
}

// Known condition value of a branch, if the environment resolves it.
std::optional<bool> resolved_cond(const ConstEnv& env, const BranchCond& c) {
  ConstVal a = operand_const(env, c.a);
  if (!c.cmp) {
    if (a.is_known()) return a.lit.b;
    return std::nullopt;
  }
  ConstVal b = operand_const(env, c.b);
  if (!a.is_known() || !b.is_known()) return std::nullopt;
  EvalResult r = eval_binop(*c.cmp, a.lit, b.lit);
  return std::get<Literal>(r).b;
}

}  // namespace

LatticeSpec<VarSet> liveness_spec(const Program& p) {
  VarSet boundary(p.outputs.begin(), p.outputs.end());
  for (const VarInfo& v : p.vars) {
    if (is_array(v.type)) boundary.insert(v.name);  // arrays are never dead
  }
  LatticeSpec<VarSet> spec;
  spec.direction = Direction::Backward;
  spec.bottom = {};
  spec.boundary = std::move(boundary);
  spec.join = set_union;
  spec.eq = [](const VarSet& a, const VarSet& b) { return a == b; };
  spec.transfer = [](const Program& prog, size_t i, const VarSet& after) {
    DefsUses du = defs_uses(prog.instrs[i]);
    VarSet before = after;
    if (du.def) before.erase(*du.def);
    for (const std::string& u : du.uses) before.insert(u);
    if (du.array_written) before.insert(*du.array_written);
    return before;
  };
  return spec;
}

LatticeSpec<ConstEnv> const_spec(const Program& p) {
  ConstEnv boundary;
  for (const VarInfo& v : p.vars) {
    if (!is_scalar(v.type)) continue;
    boundary[v.name] = v.is_input ? ConstVal::unknown() : ConstVal::known(Literal::zero_of(v.type));
  }
  LatticeSpec<ConstEnv> spec;
  spec.direction = Direction::Forward;
  spec.bottom = {};
  spec.boundary = std::move(boundary);
  spec.join = [](const ConstEnv& a, const ConstEnv& b) {
    ConstEnv r = a;
    for (const auto& [name, v] : b) r[name] = join_constval(lookup(a, name), v);
    return normalize(std::move(r));
  };
  spec.eq = [](const ConstEnv& a, const ConstEnv& b) { return a == b; };
  // The empty environment means "not yet reached": transfers are strict in it
  // and it flows nowhere. The boundary binds every scalar, so reached
  // environments are total and branch conditions never see absent operands.
  spec.transfer = [](const Program& prog, size_t i, const ConstEnv& before) {
    if (before.empty()) return before;
    const Instruction& ins = prog.instrs[i];
    ConstEnv out = before;
    if (auto* x = std::get_if<Copy>(&ins)) {
      out[x->dst] = operand_const(before, x->src);
    } else if (auto* x = std::get_if<BinAssign>(&ins)) {
      out[x->dst] = apply_binop(x->op, operand_const(before, x->a), operand_const(before, x->b));
    } else if (auto* x = std::get_if<UnAssign>(&ins)) {
      ConstVal a = operand_const(before, x->a);
      if (a.state == ConstVal::State::Known) out[x->dst] = ConstVal::known(eval_unop(x->op, a.lit));
      else out[x->dst] = a;
    } else if (auto* x = std::get_if<ArrLoad>(&ins)) {
      out[x->dst] = ConstVal::unknown();
    }
    return normalize(std::move(out));
  };
  spec.edge_feasible = [](const Program& prog, size_t i, const ConstEnv& out, size_t to) {
    if (out.empty()) return false;  // unreached
    auto* cg = std::get_if<CondGoto>(&prog.instrs[i]);
    if (!cg || cg->t_true == cg->t_false) return true;
    auto taken = resolved_cond(out, cg->cond);
    if (!taken) return true;
    return to == (*taken ? cg->t_true : cg->t_false);
  };
  return spec;
}

LatticeSpec<VarSet> equatable_spec(const Program& p, const std::set<size_t>& removed) {
  // Must-analysis: join is intersection, so bottom (the join identity) is the
  // full name set and unreached points stay vacuously "all equal". Edges out
  // of unreachable instructions never execute and must not poison the facts
  // of the reachable code they fall into.
  VarSet universe = all_var_names(p);
  auto reach = std::make_shared<const std::set<size_t>>(reachable(p));
  LatticeSpec<VarSet> spec;
  spec.direction = Direction::Forward;
  spec.bottom = universe;
  spec.boundary = universe;
  spec.join = set_intersect;
  spec.eq = [](const VarSet& a, const VarSet& b) { return a == b; };
  spec.edge_feasible = [reach](const Program&, size_t from, const VarSet&, size_t) {
    return reach->count(from) > 0;
  };
  spec.transfer = [removed](const Program& prog, size_t i, const VarSet& eq) {
    DefsUses du = defs_uses(prog.instrs[i]);
    VarSet out = eq;
    if (removed.count(i)) {
      // The source executes this assignment but the target does not; the
      // destination's values diverge from here on.
      if (du.def) out.erase(*du.def);
      return out;
    }
    bool inputs_equal = std::all_of(du.uses.begin(), du.uses.end(),
                                    [&](const std::string& u) { return eq.count(u) > 0; });
    if (du.def) {
      if (inputs_equal) out.insert(*du.def);
      else out.erase(*du.def);
    }
    if (du.array_written && !inputs_equal) out.erase(*du.array_written);
    return out;
  };
  return spec;
}

std::set<size_t> reachable(const Program& p) {
  std::set<size_t> seen;
  std::vector<size_t> stack{0};
  while (!stack.empty()) {
    size_t i = stack.back();
    stack.pop_back();
    if (!seen.insert(i).second) continue;
    for (size_t s : successors(p, i)) {
      if (s < p.n() && !seen.count(s)) stack.push_back(s);
    }
  }
  return seen;
}

namespace {

FactTable<VarSet> solve_or_throw(const Program& p, const LatticeSpec<VarSet>& spec) {
  auto r = solve_worklist(p, spec);
  if (!r.ok()) throw std::runtime_error("dataflow diverged: " + r.err);
  return std::move(*r);
}

std::map<size_t, size_t> identity_map(size_t n) {
  std::map<size_t, size_t> m;
  for (size_t i = 0; i < n; ++i) m[i] = i;
  return m;
}

std::map<size_t, size_t> compose_maps(const std::map<size_t, size_t>& first,
                                      const std::map<size_t, size_t>& second) {
  std::map<size_t, size_t> out;
  for (const auto& [s, mid] : first) {
    auto it = second.find(mid);
    if (it != second.end()) out[s] = it->second;
  }
  return out;
}

}  // namespace

PassResult uce(const Program& p) {
  PassResult r;
  r.before = p;
  std::set<size_t> keep = reachable(p);
  auto rt = retarget(p, keep);
  if (!rt.ok()) throw std::runtime_error("uce: " + rt.err);  // reachable is successor-closed
  r.after = std::move(rt->program);
  r.point_map = std::move(rt->index_map);
  r.facts.reachable = std::move(keep);
  for (size_t i = 0; i < p.n(); ++i) {
    if (!r.point_map.count(i)) r.facts.removed.insert(i);
  }
  return r;
}

FactTable<VarSet> liveness(const Program& p) { return solve_or_throw(p, liveness_spec(p)); }

PassResult strip_noops(const Program& p) {
  PassResult r;
  r.before = p;

  // skip[i]: first non-noop index at or after i, following fall-through.
  std::vector<size_t> skip(p.n() + 1, p.n());
  for (size_t i = p.n(); i-- > 0;) {
    skip[i] = std::holds_alternative<Noop>(p.instrs[i]) ? skip[i + 1] : i;
  }

  std::vector<size_t> kept;
  for (size_t i = 0; i < p.n(); ++i) {
    if (!std::holds_alternative<Noop>(p.instrs[i])) kept.push_back(i);
  }
  if (kept.empty()) throw std::runtime_error("strip_noops: program is all noops");

  std::map<size_t, size_t> rank;
  for (size_t k = 0; k < kept.size(); ++k) rank[kept[k]] = k;
  auto remap = [&](size_t target) {
    size_t t = skip[target];
    assert(t < p.n());  // a trailing noop would have been a validation error
    return rank.at(t);
  };

  Program out;
  for (const VarInfo& v : p.vars) out.add_var(v);
  out.outputs = p.outputs;
  for (size_t i : kept) {
    Instruction ins = p.instrs[i];
    if (auto* g = std::get_if<Goto>(&ins)) {
      g->target = remap(g->target);
    } else if (auto* cg = std::get_if<CondGoto>(&ins)) {
      cg->t_true = remap(cg->t_true);
      cg->t_false = remap(cg->t_false);
    }
    out.instrs.push_back(std::move(ins));
  }
  r.after = std::move(out);
  r.point_map = std::move(rank);
  for (size_t i = 0; i < p.n(); ++i) {
    if (!r.point_map.count(i)) r.facts.removed.insert(i);
  }
  return r;
}

namespace {

// A dead assignment may be replaced by a noop only if evaluating it can never
// fault: div/mod need a nonzero literal divisor, and array loads are never
// removed (the index may be out of bounds).
bool removable_when_dead(const Instruction& ins) {
  if (auto* x = std::get_if<BinAssign>(&ins)) {
    if (x->op == BinOp::Div || x->op == BinOp::Mod) {
      auto* lit = std::get_if<Literal>(&x->b);
      if (!lit) return false;
      if (lit->tag == TypeTag::Int && lit->i == 0) return false;
      if (lit->tag == TypeTag::Float && lit->f == 0.0) return false;
    }
    return true;
  }
  return std::holds_alternative<Copy>(ins) || std::holds_alternative<UnAssign>(ins);
}

}  // namespace

PassResult dae_once(const Program& p) {
  FactTable<VarSet> live = liveness(p);

  Program staged = p;
  for (size_t i = 0; i < p.n(); ++i) {
    const Instruction& ins = p.instrs[i];
    if (std::holds_alternative<Noop>(ins)) continue;  // stripped below
    if (!removable_when_dead(ins)) continue;
    DefsUses du = defs_uses(ins);
    if (du.def && !live[i].count(*du.def)) staged.instrs[i] = Noop{};
  }

  PassResult r = strip_noops(staged);
  r.before = p;
  r.facts.live_after = std::move(live);
  return r;
}

PassResult dae_fixpoint(const Program& p) {
  PassResult acc = dae_once(p);
  while (!acc.facts.removed.empty()) {
    PassResult next = dae_once(acc.after);
    if (next.facts.removed.empty()) {
      acc.facts.live_after = std::move(next.facts.live_after);
      break;
    }
    acc.after = next.after;
    acc.point_map = compose_maps(acc.point_map, next.point_map);
    acc.facts.live_after = std::move(next.facts.live_after);
    acc.facts.removed.clear();
    for (size_t i = 0; i < p.n(); ++i) {
      if (!acc.point_map.count(i)) acc.facts.removed.insert(i);
    }
  }
  acc.before = p;
  return acc;
}

PassResult uce_dae(const Program& p) {
  PassResult u = uce(p);
  PassResult d = dae_fixpoint(u.after);
  PassResult r;
  r.before = p;
  r.after = d.after;
  r.point_map = compose_maps(u.point_map, d.point_map);
  r.facts.reachable = u.facts.reachable;
  r.facts.live_after = d.facts.live_after;
  for (size_t i = 0; i < p.n(); ++i) {
    if (!r.point_map.count(i)) r.facts.removed.insert(i);
  }
  return r;
}

FactTable<ConstEnv> cp_analyze(const Program& p) {
  auto r = solve_worklist(p, const_spec(p));
  if (!r.ok()) throw std::runtime_error("dataflow diverged: " + r.err);
  return std::move(*r);
}

namespace {

Operand substitute(const Operand& o, const ConstEnv& env) {
  if (auto* name = var_of(o)) {
    ConstVal v = lookup(env, *name);
    if (v.is_known()) return v.lit;
  }
  return o;
}

}  // namespace

Instruction fold_instr(const Instruction& ins, const ConstEnv& env, const FoldQuirks* quirks) {
  Instruction out = ins;
  if (auto* x = std::get_if<Copy>(&out)) {
    x->src = substitute(x->src, env);
  } else if (auto* x = std::get_if<BinAssign>(&out)) {
    x->a = substitute(x->a, env);
    x->b = substitute(x->b, env);
    auto* la = std::get_if<Literal>(&x->a);
    auto* lb = std::get_if<Literal>(&x->b);
    if (la && lb) {
      if (auto lit = fold_binop(x->op, *la, *lb, quirks)) return Copy{x->dst, *lit};
    }
  } else if (auto* x = std::get_if<UnAssign>(&out)) {
    x->a = substitute(x->a, env);
    if (auto* la = std::get_if<Literal>(&x->a)) return Copy{x->dst, eval_unop(x->op, *la)};
  } else if (auto* x = std::get_if<ArrLoad>(&out)) {
    x->idx = substitute(x->idx, env);
  } else if (auto* x = std::get_if<ArrStore>(&out)) {
    x->idx = substitute(x->idx, env);
    x->src = substitute(x->src, env);
  } else if (auto* x = std::get_if<CondGoto>(&out)) {
    x->cond.a = substitute(x->cond.a, env);
    if (x->cond.cmp) x->cond.b = substitute(x->cond.b, env);
    if (auto taken = resolved_cond({}, x->cond)) return Goto{*taken ? x->t_true : x->t_false};
  }
  return out;
}

PassResult cp(const Program& p, const FoldQuirks* quirks) {
  PassResult r;
  r.before = p;
  FactTable<ConstEnv> envs = cp_analyze(p);
  r.after = p;
  for (size_t i = 0; i < p.n(); ++i) r.after.instrs[i] = fold_instr(p.instrs[i], envs[i], quirks);
  r.point_map = identity_map(p.n());
  r.facts.const_before = std::move(envs);
  return r;
}

}  // namespace tacc
