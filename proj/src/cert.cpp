#include "tacc/cert.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace tacc {

bool Atom::operator<(const Atom& o) const {
  if (kind != o.kind) return kind < o.kind;
  if (a != o.a) return a < o.a;
  if (b != o.b) return b < o.b;
  if (lit == o.lit) return false;
  return lit < o.lit;
}

void Invariant::add(Atom a) {
  auto it = std::lower_bound(atoms.begin(), atoms.end(), a);
  if (it != atoms.end() && *it == a) return;
  atoms.insert(it, std::move(a));
}

std::string atom_text(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::EqVar: return "eq " + a.a + " " + a.b;
    case Atom::Kind::ConstS: return "consts " + a.a + " " + cert_literal_text(a.lit);
    case Atom::Kind::ConstT: return "constt " + a.a + " " + cert_literal_text(a.lit);
    case Atom::Kind::EqArr: return "eqarr " + a.a + " " + a.b;
  }
  return "?";
}

Invariant full_identity(const Program& p) {
  Invariant inv;
  for (const VarInfo& v : p.vars) {
    if (is_scalar(v.type)) inv.add(Atom::eq_var(v.name, v.name));
    else inv.add(Atom::eq_arr(v.name, v.name));
  }
  return inv;
}

// Generators -----------------------------------------------------------------

Certificate gen_cert_uce(const PassResult& r) {
  Certificate c;
  Invariant identity = full_identity(r.before);
  for (const auto& [s, t] : r.point_map) c.entries[{s, t}] = identity;
  c.stutter_bound = 1;
  return c;
}

namespace {

size_t longest_removed_run(const Program& before, const std::map<size_t, size_t>& point_map) {
  size_t longest = 0, run = 0;
  for (size_t i = 0; i < before.n(); ++i) {
    if (point_map.count(i)) {
      run = 0;
    } else {
      ++run;
      longest = std::max(longest, run);
    }
  }
  return longest;
}

}  // namespace

Certificate gen_cert_uce_dae(const PassResult& r) {
  std::set<size_t> removed;
  for (size_t i = 0; i < r.before.n(); ++i) {
    if (!r.point_map.count(i)) removed.insert(i);
  }
  auto solved = solve_worklist(r.before, equatable_spec(r.before, removed));
  if (!solved.ok()) throw std::runtime_error("certificate analysis diverged: " + solved.err);
  const FactTable<VarSet>& equal_before = *solved;

  // Entries cover the source-reachable survivors only; the simulation never
  // visits unreachable pairs and the coverage rule only asks for reachable
  // target points.
  std::set<size_t> reach = reachable(r.before);
  Certificate c;
  for (const auto& [s, t] : r.point_map) {
    if (!reach.count(s)) continue;
    Invariant inv;
    for (const std::string& name : equal_before[s]) {
      const VarInfo* vi = r.before.find_var(name);
      if (!vi) continue;
      if (is_scalar(vi->type)) inv.add(Atom::eq_var(name, name));
      else inv.add(Atom::eq_arr(name, name));
    }
    c.entries[{s, t}] = std::move(inv);
  }
  c.stutter_bound = 1 + longest_removed_run(r.before, r.point_map);
  return c;
}

Certificate gen_cert_cp(const PassResult& r) {
  assert(r.facts.const_before);
  const FactTable<ConstEnv>& envs = *r.facts.const_before;
  Invariant identity = full_identity(r.before);

  Certificate c;
  for (size_t i : reachable(r.after)) {
    Invariant inv = identity;
    for (const auto& [name, cv] : envs[i]) {
      if (cv.is_known()) inv.add(Atom::const_src(name, cv.lit));
    }
    c.entries[{i, i}] = std::move(inv);
  }
  c.stutter_bound = 1;
  return c;
}

// Symbolic environments ------------------------------------------------------

namespace {

using SymEnv = std::map<std::string, ExprPtr>;

// Union-find over (side, name) pairs; equated classes share one expression,
// classes bound to a constant become that literal.
struct EnvBuilder {
  std::map<std::pair<int, std::string>, int> ids;
  std::vector<int> parent;
  std::vector<std::optional<Literal>> constant;
  bool contradictory = false;

  int node(int side, const std::string& name) {
    auto key = std::make_pair(side, name);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(parent.size());
    ids.emplace(key, id);
    parent.push_back(id);
    constant.push_back(std::nullopt);
    return id;
  }

  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (constant[a] && constant[b] && !(*constant[a] == *constant[b])) contradictory = true;
    if (!constant[a]) constant[a] = constant[b];
    parent[b] = a;
  }

  void bind(int x, const Literal& l) {
    x = find(x);
    if (constant[x] && !(*constant[x] == l)) contradictory = true;
    constant[x] = l;
  }
};

struct EnvPair {
  SymEnv src;
  SymEnv tgt;
};

// Builds the paired store from an invariant. Unmentioned variables get
// distinct fresh symbols on each side.
std::optional<EnvPair> envs_from_invariant(const Program& src, const Program& tgt,
                                           const Invariant& inv) {
  EnvBuilder b;
  for (const Atom& atom : inv.atoms) {
    switch (atom.kind) {
      case Atom::Kind::EqVar:
      case Atom::Kind::EqArr:
        b.unite(b.node(0, atom.a), b.node(1, atom.b));
        break;
      case Atom::Kind::ConstS:
        b.bind(b.node(0, atom.a), atom.lit);
        break;
      case Atom::Kind::ConstT:
        b.bind(b.node(1, atom.a), atom.lit);
        break;
    }
  }
  if (b.contradictory) return std::nullopt;

  EnvPair out;
  int next_sym = 0;
  std::map<int, ExprPtr> class_expr;
  auto assign = [&](int side, const VarInfo& vi, SymEnv& env) {
    auto key = std::make_pair(side, vi.name);
    auto it = b.ids.find(key);
    if (it == b.ids.end()) {
      // Not mentioned by any atom: fresh symbol, unequal to everything.
      if (is_scalar(vi.type)) env[vi.name] = make_sym(next_sym++, vi.type);
      else env[vi.name] = make_arr_sym(next_sym++, vi.type, vi.array_len);
      return;
    }
    int root = b.find(it->second);
    auto ce = class_expr.find(root);
    if (ce == class_expr.end()) {
      ExprPtr e;
      if (b.constant[root]) e = make_lit(*b.constant[root]);
      else if (is_scalar(vi.type)) e = make_sym(next_sym++, vi.type);
      else e = make_arr_sym(next_sym++, vi.type, vi.array_len);
      ce = class_expr.emplace(root, std::move(e)).first;
    }
    env[vi.name] = ce->second;
  };
  for (const VarInfo& vi : src.vars) assign(0, vi, out.src);
  for (const VarInfo& vi : tgt.vars) assign(1, vi, out.tgt);
  return out;
}

// The strongest facts valid when both programs start on the same inputs:
// inputs share a symbol, everything else is its default value.
EnvPair initial_envs(const Program& src, const Program& tgt) {
  EnvPair out;
  int next_sym = 0;
  std::map<std::string, ExprPtr> shared;
  auto assign = [&](const VarInfo& vi, SymEnv& env, const Program& other) {
    if (!vi.is_input) {
      if (is_scalar(vi.type)) env[vi.name] = make_lit(Literal::zero_of(vi.type));
      else env[vi.name] = make_arr_default(vi.type, vi.array_len);
      return;
    }
    const VarInfo* o = other.find_var(vi.name);
    bool same = o && o->is_input && o->type == vi.type && o->array_len == vi.array_len;
    if (same) {
      auto it = shared.find(vi.name);
      if (it == shared.end()) {
        ExprPtr e = is_scalar(vi.type) ? make_sym(next_sym++, vi.type)
                                       : make_arr_sym(next_sym++, vi.type, vi.array_len);
        it = shared.emplace(vi.name, std::move(e)).first;
      }
      env[vi.name] = it->second;
    } else {
      env[vi.name] = is_scalar(vi.type) ? make_sym(next_sym++, vi.type)
                                        : make_arr_sym(next_sym++, vi.type, vi.array_len);
    }
  };
  for (const VarInfo& vi : src.vars) assign(vi, out.src, tgt);
  for (const VarInfo& vi : tgt.vars) assign(vi, out.tgt, src);
  return out;
}

// Symbolic execution of one non-branch instruction --------------------------

ExprPtr operand_expr(const Operand& o, const SymEnv& env) {
  if (auto* name = var_of(o)) return env.at(*name);
  return make_lit(std::get<Literal>(o));
}

ExprPtr cond_expr(const BranchCond& c, const SymEnv& env, const FoldQuirks* quirks) {
  if (!c.cmp) return simplify(operand_expr(c.a, env), quirks);
  return simplify(make_bin(*c.cmp, operand_expr(c.a, env), operand_expr(c.b, env)), quirks);
}

bool lit_zero(const ExprPtr& e) {
  if (e->kind != ExprKind::Lit) return false;
  if (e->lit.tag == TypeTag::Int) return e->lit.i == 0;
  if (e->lit.tag == TypeTag::Float) return e->lit.f == 0.0;
  return false;
}

std::optional<int64_t> array_len_of(const Program& p, const std::string& arr) {
  const VarInfo* vi = p.find_var(arr);
  if (!vi) return std::nullopt;
  return vi->array_len;
}

// Executes one assignment-like instruction on `env`; returns a fault kind
// when the instruction is guaranteed to fault. Branches and halt are handled
// by the caller.
std::optional<FaultKind> exec_sym(const Program& p, size_t idx, SymEnv& env,
                                  const FoldQuirks* quirks) {
  const Instruction& ins = p.instrs[idx];
  if (auto* x = std::get_if<Copy>(&ins)) {
    env[x->dst] = simplify(operand_expr(x->src, env), quirks);
  } else if (auto* x = std::get_if<BinAssign>(&ins)) {
    ExprPtr a = operand_expr(x->a, env);
    ExprPtr b = operand_expr(x->b, env);
    bool div_like = x->op == BinOp::Div || x->op == BinOp::Mod;
    bool broken = quirks && quirks->div_by_zero_folds_to_zero;
    if (div_like && lit_zero(b) && !broken) {
      return x->op == BinOp::Div ? FaultKind::DivByZero : FaultKind::ModByZero;
    }
    env[x->dst] = simplify(make_bin(x->op, std::move(a), std::move(b)), quirks);
  } else if (auto* x = std::get_if<UnAssign>(&ins)) {
    env[x->dst] = simplify(make_un(x->op, operand_expr(x->a, env)), quirks);
  } else if (auto* x = std::get_if<ArrLoad>(&ins)) {
    ExprPtr i = simplify(operand_expr(x->idx, env), quirks);
    auto len = array_len_of(p, x->arr);
    if (i->kind == ExprKind::Lit && len && (i->lit.i < 0 || i->lit.i >= *len))
      return FaultKind::OutOfBounds;
    env[x->dst] = simplify(make_select(env.at(x->arr), std::move(i)), quirks);
  } else if (auto* x = std::get_if<ArrStore>(&ins)) {
    ExprPtr i = simplify(operand_expr(x->idx, env), quirks);
    auto len = array_len_of(p, x->arr);
    if (i->kind == ExprKind::Lit && len && (i->lit.i < 0 || i->lit.i >= *len))
      return FaultKind::OutOfBounds;
    ExprPtr v = simplify(operand_expr(x->src, env), quirks);
    env[x->arr] = make_store(env.at(x->arr), std::move(i), std::move(v));
  }
  // Noop: nothing. Goto/CondGoto/Halt: caller's responsibility.
  return std::nullopt;
}

// Checker core ----------------------------------------------------------------

struct ArmAssumption {
  ExprPtr cond;  // target branch condition
  bool taken = true;
};

struct EntryChecker {
  const Program& src;
  const Program& tgt;
  const Certificate& cert;
  const CheckOptions& opts;

  bool atom_holds(const Atom& atom, const SymEnv& senv, const SymEnv& tenv) const {
    switch (atom.kind) {
      case Atom::Kind::EqVar:
      case Atom::Kind::EqArr: {
        auto si = senv.find(atom.a);
        auto ti = tenv.find(atom.b);
        if (si == senv.end() || ti == tenv.end()) return false;
        return exprs_equal(si->second, ti->second);
      }
      case Atom::Kind::ConstS: {
        auto si = senv.find(atom.a);
        return si != senv.end() && exprs_equal(si->second, make_lit(atom.lit));
      }
      case Atom::Kind::ConstT: {
        auto ti = tenv.find(atom.a);
        return ti != tenv.end() && exprs_equal(ti->second, make_lit(atom.lit));
      }
    }
    return false;
  }

  Verdict verify_invariant(PointPair at, const Invariant& inv, const SymEnv& senv,
                           const SymEnv& tenv) const {
    for (const Atom& atom : inv.atoms) {
      if (!atom_holds(atom, senv, tenv))
        return Verdict::reject(at, "atom not established: " + atom_text(atom));
    }
    return Verdict::ok();
  }

  Verdict outputs_equal(PointPair at, const SymEnv& senv, const SymEnv& tenv) const {
    if (src.outputs != tgt.outputs)
      return Verdict::reject(at, "halt mismatch: output lists differ");
    for (const std::string& name : src.outputs) {
      auto si = senv.find(name);
      auto ti = tenv.find(name);
      if (si == senv.end() || ti == tenv.end() || !exprs_equal(si->second, ti->second))
        return Verdict::reject(at, "halt mismatch: output " + name + " not provably equal");
    }
    return Verdict::ok();
  }

  // Advances the source by one instruction. `assume` carries the target's
  // branch condition for the arm under check: a source branch whose condition
  // matches it follows the same arm.
  Verdict source_step(PointPair at, size_t& s, SymEnv& senv,
                      const std::optional<ArmAssumption>& assume) const {
    const Instruction& ins = src.instrs[s];
    if (std::holds_alternative<Halt>(ins))
      return Verdict::reject(at, "halt mismatch: source halts while target continues");
    if (auto* g = std::get_if<Goto>(&ins)) {
      s = g->target;
      return Verdict::ok();
    }
    if (auto* cg = std::get_if<CondGoto>(&ins)) {
      if (cg->t_true == cg->t_false) {
        s = cg->t_true;
        return Verdict::ok();
      }
      ExprPtr c = cond_expr(cg->cond, senv, opts.quirks);
      if (c->kind == ExprKind::Lit) {
        s = c->lit.b ? cg->t_true : cg->t_false;
        return Verdict::ok();
      }
      if (assume && exprs_equal(c, assume->cond)) {
        s = assume->taken ? cg->t_true : cg->t_false;
        return Verdict::ok();
      }
      return Verdict::reject(at, "unresolved source branch: " + expr_text(c));
    }
    if (auto fault = exec_sym(src, s, senv, opts.quirks))
      return Verdict::reject(at, "fault divergence: source faults " + fault_name(*fault));
    ++s;
    return Verdict::ok();
  }

  // Target halted at this entry: the source must halt too, within the
  // stutter bound, with provably equal outputs.
  Verdict check_halt(PointPair key, SymEnv senv, const SymEnv& tenv) const {
    size_t s = key.first;
    for (size_t steps = 0; steps <= cert.stutter_bound; ++steps) {
      if (std::holds_alternative<Halt>(src.instrs[s])) return outputs_equal(key, senv, tenv);
      Verdict v = source_step(key, s, senv, std::nullopt);
      if (!v.accepted) return v;
    }
    return Verdict::reject(key, "halt mismatch: source does not halt within stutter bound");
  }

  // Target faults at this entry: the source must fault with the same kind.
  Verdict check_fault(PointPair key, FaultKind kind, SymEnv senv) const {
    size_t s = key.first;
    for (size_t steps = 0; steps <= cert.stutter_bound; ++steps) {
      const Instruction& ins = src.instrs[s];
      if (std::holds_alternative<Halt>(ins))
        return Verdict::reject(key, "fault divergence: source halts while target faults");
      if (auto* g = std::get_if<Goto>(&ins)) {
        s = g->target;
        continue;
      }
      if (auto* cg = std::get_if<CondGoto>(&ins)) {
        if (cg->t_true == cg->t_false) {
          s = cg->t_true;
          continue;
        }
        ExprPtr c = cond_expr(cg->cond, senv, opts.quirks);
        if (c->kind != ExprKind::Lit)
          return Verdict::reject(key, "unresolved source branch: " + expr_text(c));
        s = c->lit.b ? cg->t_true : cg->t_false;
        continue;
      }
      if (auto fault = exec_sym(src, s, senv, opts.quirks)) {
        if (*fault == kind) return Verdict::ok();
        return Verdict::reject(key, "fault divergence: source faults " + fault_name(*fault) +
                                        ", target faults " + fault_name(kind));
      }
      ++s;
    }
    return Verdict::reject(key, "fault divergence: source does not fault within stutter bound");
  }

  // Walks the source from `s` until it reaches a point paired with `t_next`,
  // then verifies that entry's invariant.
  Verdict walk_to(PointPair key, size_t s, size_t t_next, SymEnv senv, const SymEnv& tenv,
                  const std::optional<ArmAssumption>& assume) const {
    for (size_t steps = 1; steps <= cert.stutter_bound; ++steps) {
      Verdict v = source_step(key, s, senv, assume);
      if (!v.accepted) return v;
      auto it = cert.entries.find({s, t_next});
      if (it != cert.entries.end()) return verify_invariant(key, it->second, senv, tenv);
    }
    return Verdict::reject(key, "no successor entry");
  }

  Verdict check_one(PointPair key) const {
    auto entry = cert.entries.find(key);
    assert(entry != cert.entries.end());
    auto envs = envs_from_invariant(src, tgt, entry->second);
    if (!envs) return Verdict::reject(key, "contradictory invariant");
    SymEnv& senv = envs->src;
    SymEnv& tenv = envs->tgt;

    const Instruction& tins = tgt.instrs[key.second];
    if (std::holds_alternative<Halt>(tins)) return check_halt(key, senv, tenv);

    if (auto* g = std::get_if<Goto>(&tins))
      return walk_to(key, key.first, g->target, senv, tenv, std::nullopt);

    if (auto* cg = std::get_if<CondGoto>(&tins)) {
      if (cg->t_true == cg->t_false)
        return walk_to(key, key.first, cg->t_true, senv, tenv, std::nullopt);
      ExprPtr c = cond_expr(cg->cond, tenv, opts.quirks);
      if (c->kind == ExprKind::Lit)
        return walk_to(key, key.first, c->lit.b ? cg->t_true : cg->t_false, senv, tenv,
                       std::nullopt);
      Verdict v = walk_to(key, key.first, cg->t_true, senv, tenv, ArmAssumption{c, true});
      if (!v.accepted) return v;
      return walk_to(key, key.first, cg->t_false, senv, tenv, ArmAssumption{c, false});
    }

    // Assignment or noop: one fall-through successor.
    SymEnv tenv_after = tenv;
    if (auto fault = exec_sym(tgt, key.second, tenv_after, opts.quirks))
      return check_fault(key, *fault, senv);
    return walk_to(key, key.first, key.second + 1, senv, tenv_after, std::nullopt);
  }

  // Fast path: full-identity invariant, and the instruction pair is identical
  // modulo renumbering target points through the certificate's entry map.
  // Successor invariants must be full identity too, so accepting without
  // symbolic execution agrees with the slow path.
  bool fast_path_applies(PointPair key, const Invariant& identity) const {
    if (!(src.vars == tgt.vars)) return false;
    auto entry = cert.entries.find(key);
    if (!(entry->second == identity)) return false;

    auto succ_ok = [&](size_t s, size_t t) {
      auto it = cert.entries.find({s, t});
      return it != cert.entries.end() && it->second == identity;
    };

    const Instruction& a = src.instrs[key.first];
    const Instruction& b = tgt.instrs[key.second];
    if (a.index() != b.index()) return false;
    if (auto* ga = std::get_if<Goto>(&a)) {
      return succ_ok(ga->target, std::get<Goto>(b).target);
    }
    if (auto* ca = std::get_if<CondGoto>(&a)) {
      const auto& cb = std::get<CondGoto>(b);
      return ca->cond == cb.cond && succ_ok(ca->t_true, cb.t_true) &&
             succ_ok(ca->t_false, cb.t_false);
    }
    if (std::holds_alternative<Halt>(a)) return src.outputs == tgt.outputs;
    if (!(a == b)) return false;
    return succ_ok(key.first + 1, key.second + 1);
  }
};

Verdict structural_checks(const Program& src, const Program& tgt, const Certificate& cert) {
  if (cert.stutter_bound < 1 || cert.stutter_bound > src.n())
    return Verdict::reject({0, 0}, "stutter bound out of range");
  if (cert.entries.empty()) return Verdict::reject({0, 0}, "certificate has no entries");

  std::set<size_t> tgt_points;
  for (const auto& [key, inv] : cert.entries) {
    auto [s, t] = key;
    if (s >= src.n() || t >= tgt.n()) return Verdict::reject(key, "entry point out of range");
    if (!tgt_points.insert(t).second) return Verdict::reject(key, "duplicate target point");
    std::map<std::string, Literal> consts_s, consts_t;
    for (const Atom& atom : inv.atoms) {
      switch (atom.kind) {
        case Atom::Kind::EqVar:
        case Atom::Kind::EqArr: {
          const VarInfo* a = src.find_var(atom.a);
          const VarInfo* b = tgt.find_var(atom.b);
          if (!a || !b)
            return Verdict::reject(key, "atom names undeclared variable: " + atom_text(atom));
          bool want_array = atom.kind == Atom::Kind::EqArr;
          if (is_array(a->type) != want_array || is_array(b->type) != want_array)
            return Verdict::reject(key, "atom kind does not match variable kind: " + atom_text(atom));
          if (a->type != b->type || a->array_len != b->array_len)
            return Verdict::reject(key, "atom types disagree: " + atom_text(atom));
          break;
        }
        case Atom::Kind::ConstS:
        case Atom::Kind::ConstT: {
          const Program& side = atom.kind == Atom::Kind::ConstS ? src : tgt;
          const VarInfo* v = side.find_var(atom.a);
          if (!v) return Verdict::reject(key, "atom names undeclared variable: " + atom_text(atom));
          if (!is_scalar(v->type) || v->type != atom.lit.tag)
            return Verdict::reject(key, "atom types disagree: " + atom_text(atom));
          auto& table = atom.kind == Atom::Kind::ConstS ? consts_s : consts_t;
          auto [it, fresh] = table.emplace(atom.a, atom.lit);
          if (!fresh && !(it->second == atom.lit))
            return Verdict::reject(key, "contradictory invariant: " + atom_text(atom));
          break;
        }
      }
    }
  }
  return Verdict::ok();
}

// The start obligation: from (source 0, target 0) with identical initial
// stores, the source reaches a point paired with target 0 within the stutter
// bound, and that entry's invariant holds there.
Verdict start_check(const Program& src, const Program& tgt, const Certificate& cert,
                    const CheckOptions& opts) {
  EntryChecker ck{src, tgt, cert, opts};
  EnvPair envs = initial_envs(src, tgt);
  size_t s = 0;
  for (size_t steps = 0; steps <= cert.stutter_bound; ++steps) {
    auto it = cert.entries.find({s, 0});
    if (it != cert.entries.end())
      return ck.verify_invariant({s, 0}, it->second, envs.src, envs.tgt);
    Verdict v = ck.source_step({0, 0}, s, envs.src, std::nullopt);
    if (!v.accepted) return v;
  }
  return Verdict::reject({0, 0}, "no successor entry");
}

}  // namespace

Verdict check_entry(const Program& src, const Program& tgt, const Certificate& cert,
                    PointPair key, const CheckOptions& opts) {
  EntryChecker ck{src, tgt, cert, opts};
  return ck.check_one(key);
}

Verdict check(const Program& src, const Program& tgt, const Certificate& cert,
              const CheckOptions& opts) {
  Verdict v = structural_checks(src, tgt, cert);
  if (!v.accepted) return v;

  v = start_check(src, tgt, cert, opts);
  if (!v.accepted) return v;

  EntryChecker ck{src, tgt, cert, opts};
  Invariant identity = full_identity(src);
  for (const auto& [key, inv] : cert.entries) {
    if (opts.use_fast_path && ck.fast_path_applies(key, identity)) continue;
    v = ck.check_one(key);
    if (!v.accepted) return v;
  }

  std::set<size_t> covered;
  for (const auto& [key, inv] : cert.entries) covered.insert(key.second);
  for (size_t i : reachable(tgt)) {
    if (!covered.count(i))
      return Verdict::reject({0, i}, "uncovered reachable target point " + std::to_string(i));
  }
  return Verdict::ok();
}

// Serialization ---------------------------------------------------------------

std::string print_cert(const Certificate& c) {
  std::ostringstream os;
  os << "cert v1 stutter=" << c.stutter_bound << "\n";
  for (const auto& [key, inv] : c.entries) {
    os << "map " << key.first << " " << key.second << " :";
    for (const Atom& a : inv.atoms) os << " " << atom_text(a);
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

std::optional<Literal> parse_cert_literal(const std::string& s) {
  if (s.size() < 2 || s[1] != ':') return std::nullopt;
  std::string_view body(s);
  body.remove_prefix(2);
  switch (s[0]) {
    case 'i':
      if (auto v = int_from_text(body)) return Literal::of_int(*v);
      return std::nullopt;
    case 'f':
      if (auto v = double_from_text(body)) return Literal::of_float(*v);
      return std::nullopt;
    case 'b':
      if (body == "true") return Literal::of_bool(true);
      if (body == "false") return Literal::of_bool(false);
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

}  // namespace

std::string cert_literal_text(const Literal& l) {
  switch (l.tag) {
    case TypeTag::Int: return "i:" + int_to_text(l.i);
    case TypeTag::Float: return "f:" + double_to_text(l.f);
    case TypeTag::Bool: return l.b ? "b:true" : "b:false";
    default: return "?";
  }
}

Result<Certificate> parse_cert(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  size_t lineno = 0;
  auto fail = [&](const std::string& msg) {
    return Result<Certificate>::failure("line " + std::to_string(lineno) + ": " + msg);
  };

  Certificate c;
  bool have_header = false;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto toks = split_ws(line);
    if (!have_header) {
      if (toks.size() != 3 || toks[0] != "cert" || toks[1] != "v1" ||
          toks[2].rfind("stutter=", 0) != 0)
        return fail("expected header 'cert v1 stutter=<k>'");
      auto k = int_from_text(std::string_view(toks[2]).substr(8));
      if (!k || *k < 1) return fail("bad stutter bound");
      c.stutter_bound = static_cast<size_t>(*k);
      have_header = true;
      continue;
    }
    if (toks[0] != "map" || toks.size() < 4 || toks[3] != ":") return fail("expected 'map <s> <t> :'");
    auto s = int_from_text(toks[1]);
    auto t = int_from_text(toks[2]);
    if (!s || !t || *s < 0 || *t < 0) return fail("bad entry points");
    Invariant inv;
    size_t i = 4;
    while (i < toks.size()) {
      const std::string& kind = toks[i];
      if (kind == "eq" || kind == "eqarr") {
        if (i + 2 >= toks.size()) return fail("truncated atom");
        if (kind == "eq") inv.add(Atom::eq_var(toks[i + 1], toks[i + 2]));
        else inv.add(Atom::eq_arr(toks[i + 1], toks[i + 2]));
        i += 3;
      } else if (kind == "consts" || kind == "constt") {
        if (i + 2 >= toks.size()) return fail("truncated atom");
        auto lit = parse_cert_literal(toks[i + 2]);
        if (!lit) return fail("bad literal " + toks[i + 2]);
        if (kind == "consts") inv.add(Atom::const_src(toks[i + 1], *lit));
        else inv.add(Atom::const_tgt(toks[i + 1], *lit));
        i += 3;
      } else {
        return fail("unknown atom kind " + kind);
      }
    }
    auto key = PointPair{static_cast<size_t>(*s), static_cast<size_t>(*t)};
    if (c.entries.count(key)) return fail("duplicate entry");
    c.entries[key] = std::move(inv);
  }
  if (!have_header) return Result<Certificate>::failure("empty certificate file");
  return Result<Certificate>::success(std::move(c));
}

}  // namespace tacc
