// Random program generation, certificate/program mutation and the fuzz loop.
#include <algorithm>
#include <sstream>

#include "tacc/harness.hpp"

namespace tacc {

namespace {

// All randomness goes through these helpers so generated programs are stable
// across standard-library implementations.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  uint64_t raw() { return gen(); }
  size_t pick(size_t n) { return n ? static_cast<size_t>(gen() % n) : 0; }
  int64_t range(int64_t lo, int64_t hi) {  // inclusive
    return lo + static_cast<int64_t>(gen() % static_cast<uint64_t>(hi - lo + 1));
  }
  bool chance(unsigned pct) { return gen() % 100 < pct; }
};

struct GenVars {
  std::vector<std::string> ints;      // general int scalars
  std::vector<std::string> floats;
  std::vector<std::string> bools;
  std::vector<std::string> counters;  // loop counters, always >= 0
  std::string index_var;              // scratch for array indices
  struct Arr {
    std::string name;
    int64_t len;
  };
  std::vector<Arr> arrays;
};

class ProgramGen {
 public:
  ProgramGen(uint64_t seed, size_t budget) : rng_(seed), budget_(budget) {}

  Program build() {
    declare();
    while (code_.size() + 1 < budget_) chunk();
    code_.push_back(Halt{});
    prog_.instrs = std::move(code_);
    return std::move(prog_);
  }

 private:
  Rng rng_;
  size_t budget_;
  Program prog_;
  GenVars v_;
  std::vector<Instruction> code_;

  void add_var(const std::string& name, TypeTag t, int64_t len, bool input) {
    prog_.add_var(VarInfo{name, t, len, input});
  }

  void declare() {
    size_t n_int = 2 + rng_.pick(3);
    for (size_t i = 0; i < n_int; ++i) {
      std::string name = "x" + std::to_string(i);
      add_var(name, TypeTag::Int, 0, rng_.chance(20));
      v_.ints.push_back(name);
    }
    size_t n_float = rng_.pick(2);
    for (size_t i = 0; i < n_float; ++i) {
      std::string name = "f" + std::to_string(i);
      add_var(name, TypeTag::Float, 0, rng_.chance(20));
      v_.floats.push_back(name);
    }
    size_t n_bool = 1 + rng_.pick(2);
    for (size_t i = 0; i < n_bool; ++i) {
      std::string name = "b" + std::to_string(i);
      add_var(name, TypeTag::Bool, 0, rng_.chance(20));
      v_.bools.push_back(name);
    }
    add_var("dead", TypeTag::Int, 0, false);
    size_t n_ctr = 1 + rng_.pick(2);
    for (size_t i = 0; i < n_ctr; ++i) {
      std::string name = "c" + std::to_string(i);
      add_var(name, TypeTag::Int, 0, false);
      v_.counters.push_back(name);
    }
    v_.index_var = "ix";
    add_var("ix", TypeTag::Int, 0, false);
    size_t n_arr = rng_.pick(2);
    for (size_t i = 0; i < n_arr; ++i) {
      std::string name = "A" + std::to_string(i);
      int64_t len = 3 + static_cast<int64_t>(rng_.pick(6));
      add_var(name, TypeTag::ArrInt, len, false);
      v_.arrays.push_back({name, len});
    }
    for (const std::string& name : v_.ints) {
      if (rng_.chance(40)) prog_.outputs.push_back(name);
    }
    for (const std::string& name : v_.floats) {
      if (rng_.chance(40)) prog_.outputs.push_back(name);
    }
    for (const std::string& name : v_.bools) {
      if (rng_.chance(25)) prog_.outputs.push_back(name);
    }
    for (const auto& a : v_.arrays) {
      if (rng_.chance(15)) prog_.outputs.push_back(a.name);
    }
  }

  Operand int_operand() {
    if (rng_.chance(40) || v_.ints.empty())
      return lit_operand(Literal::of_int(rng_.range(-9, 20)));
    return var_operand(v_.ints[rng_.pick(v_.ints.size())]);
  }

  Operand float_operand() {
    if (rng_.chance(40) || v_.floats.empty())
      return lit_operand(Literal::of_float(static_cast<double>(rng_.range(-40, 40)) / 4.0));
    return var_operand(v_.floats[rng_.pick(v_.floats.size())]);
  }

  Operand bool_operand() {
    if (rng_.chance(25) || v_.bools.empty())
      return lit_operand(Literal::of_bool(rng_.chance(50)));
    return var_operand(v_.bools[rng_.pick(v_.bools.size())]);
  }

  void emit_assign() {
    size_t arr_weight = v_.arrays.empty() ? 0 : 20;
    size_t roll = rng_.pick(100);
    if (roll < arr_weight) {
      emit_array_op();
      return;
    }
    roll = rng_.pick(v_.floats.empty() ? 70 : 100);
    if (roll < 12) {  // dead-by-construction assignment
      code_.push_back(Copy{"dead", int_operand()});
      return;
    }
    if (roll < 55) {
      const std::string& dst = v_.ints[rng_.pick(v_.ints.size())];
      if (rng_.chance(25)) {
        code_.push_back(Copy{dst, int_operand()});
      } else {
        static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Mod};
        BinOp op = ops[rng_.pick(5)];
        Operand b = int_operand();
        if (op == BinOp::Div || op == BinOp::Mod) {
          int64_t d = rng_.range(1, 7);
          b = lit_operand(Literal::of_int(rng_.chance(50) ? d : -d));
        }
        code_.push_back(BinAssign{dst, op, int_operand(), b});
      }
      return;
    }
    if (roll < 70) {
      const std::string& dst = v_.bools[rng_.pick(v_.bools.size())];
      size_t form = rng_.pick(3);
      if (form == 0) {
        static const BinOp cmps[] = {BinOp::Lt, BinOp::Le, BinOp::Gt,
                                     BinOp::Ge, BinOp::Eq, BinOp::Ne};
        code_.push_back(BinAssign{dst, cmps[rng_.pick(6)], int_operand(), int_operand()});
      } else if (form == 1) {
        code_.push_back(
            BinAssign{dst, rng_.chance(50) ? BinOp::And : BinOp::Or, bool_operand(), bool_operand()});
      } else {
        code_.push_back(UnAssign{dst, UnOp::Not, bool_operand()});
      }
      return;
    }
    const std::string& dst = v_.floats[rng_.pick(v_.floats.size())];
    size_t form = rng_.pick(4);
    if (form == 0) {
      code_.push_back(Copy{dst, float_operand()});
    } else if (form == 1) {
      code_.push_back(UnAssign{dst, UnOp::IntToFloat, int_operand()});
    } else if (form == 2) {
      code_.push_back(UnAssign{dst, UnOp::Neg, float_operand()});
    } else {
      static const BinOp ops[] = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div};
      BinOp op = ops[rng_.pick(4)];
      Operand b = float_operand();
      if (op == BinOp::Div)
        b = lit_operand(Literal::of_float(static_cast<double>(rng_.range(1, 16)) / 2.0));
      code_.push_back(BinAssign{dst, op, float_operand(), b});
    }
  }

  // Array access through `ix := c % len` keeps indices in bounds: counters
  // never go negative.
  void emit_array_op() {
    const auto& arr = v_.arrays[rng_.pick(v_.arrays.size())];
    Operand idx;
    if (rng_.chance(50) || v_.counters.empty()) {
      idx = lit_operand(Literal::of_int(static_cast<int64_t>(rng_.pick(arr.len))));
    } else {
      const std::string& c = v_.counters[rng_.pick(v_.counters.size())];
      code_.push_back(
          BinAssign{v_.index_var, BinOp::Mod, var_operand(c), lit_operand(Literal::of_int(arr.len))});
      idx = var_operand(v_.index_var);
    }
    if (rng_.chance(50)) {
      code_.push_back(ArrStore{arr.name, idx, int_operand()});
    } else {
      code_.push_back(ArrLoad{v_.ints[rng_.pick(v_.ints.size())], arr.name, idx});
    }
  }

  BranchCond random_cond() {
    if (rng_.chance(40)) return BranchCond::bare(bool_operand());
    static const BinOp cmps[] = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne};
    return BranchCond::compare(cmps[rng_.pick(6)], int_operand(), int_operand());
  }

  void chunk() {
    size_t roll = rng_.pick(100);
    if (roll < 38) {
      size_t n = 1 + rng_.pick(4);
      for (size_t i = 0; i < n; ++i) emit_assign();
    } else if (roll < 62) {
      bounded_loop();
    } else if (roll < 82) {
      diamond();
    } else if (roll < 87) {
      // Both arms to the immediately following instruction.
      size_t next = code_.size() + 1;
      code_.push_back(CondGoto{random_cond(), next, next});
    } else if (roll < 88) {
      // Reachable trivial self loop: the rare nonterminating seed.
      code_.push_back(Goto{code_.size()});
    } else {
      unreachable_region();
    }
  }

  void bounded_loop() {
    const std::string& c = v_.counters[rng_.pick(v_.counters.size())];
    code_.push_back(Copy{c, lit_operand(Literal::of_int(rng_.range(2, 6)))});
    size_t head = code_.size();
    size_t body = 1 + rng_.pick(3);
    for (size_t i = 0; i < body; ++i) emit_assign();
    code_.push_back(BinAssign{c, BinOp::Sub, var_operand(c), lit_operand(Literal::of_int(1))});
    code_.push_back(
        CondGoto{BranchCond::compare(BinOp::Gt, var_operand(c), lit_operand(Literal::of_int(0))),
                 head, code_.size() + 1});
  }

  void diamond() {
    size_t branch = code_.size();
    code_.push_back(CondGoto{random_cond(), 0, 0});  // patched below
    size_t n_else = 1 + rng_.pick(2);
    for (size_t i = 0; i < n_else; ++i) emit_assign();
    size_t jump = code_.size();
    code_.push_back(Goto{0});  // patched
    size_t then_start = code_.size();
    size_t n_then = 1 + rng_.pick(2);
    for (size_t i = 0; i < n_then; ++i) emit_assign();
    size_t join = code_.size();
    auto& cg = std::get<CondGoto>(code_[branch]);
    cg.t_true = then_start;
    cg.t_false = branch + 1;
    std::get<Goto>(code_[jump]).target = join;
  }

  void unreachable_region() {
    size_t jump = code_.size();
    code_.push_back(Goto{0});  // patched to skip the region
    size_t region = code_.size();
    size_t n = 1 + rng_.pick(3);
    for (size_t i = 0; i < n; ++i) emit_assign();
    if (rng_.chance(40)) {
      // Dead control flow: a self loop or a jump back into the region.
      if (rng_.chance(50)) code_.push_back(Goto{code_.size()});
      else code_.push_back(Goto{region});
    } else {
      code_.push_back(Goto{code_.size() + 1});
    }
    std::get<Goto>(code_[jump]).target = code_.size();
  }
};

}  // namespace

Program gen_random_program(uint64_t seed, size_t size_budget) {
  return ProgramGen(seed, std::max<size_t>(size_budget, 2)).build();
}

Inputs random_inputs(const Program& p, std::mt19937_64& rng) {
  Rng r(rng());
  Inputs in;
  for (const VarInfo& vi : p.vars) {
    if (!vi.is_input) continue;
    switch (vi.type) {
      case TypeTag::Int: in[vi.name] = Literal::of_int(r.range(-10, 20)); break;
      case TypeTag::Float:
        in[vi.name] = Literal::of_float(static_cast<double>(r.range(-40, 40)) / 4.0);
        break;
      case TypeTag::Bool: in[vi.name] = Literal::of_bool(r.chance(50)); break;
      default: {
        ArrayVal a;
        a.elem = elem_type(vi.type);
        for (int64_t i = 0; i < vi.array_len; ++i) {
          if (a.elem == TypeTag::Int) a.elems.push_back(Literal::of_int(r.range(-10, 20)));
          else if (a.elem == TypeTag::Float)
            a.elems.push_back(Literal::of_float(static_cast<double>(r.range(-40, 40)) / 4.0));
          else a.elems.push_back(Literal::of_bool(r.chance(50)));
        }
        in[vi.name] = std::move(a);
      }
    }
  }
  return in;
}

std::optional<std::string> differential(const Program& src, const Program& tgt, size_t n_inputs,
                                        uint64_t seed, size_t fuel) {
  std::mt19937_64 rng(seed);
  bool has_inputs =
      std::any_of(src.vars.begin(), src.vars.end(), [](const VarInfo& v) { return v.is_input; });
  size_t n = has_inputs ? n_inputs : 1;
  for (size_t k = 0; k < n; ++k) {
    Inputs in = random_inputs(src, rng);
    auto oa = run(src, in, fuel);
    auto ob = run(tgt, in, fuel);
    if (!oa.ok()) return "source rejected inputs: " + oa.err;
    if (!ob.ok()) return "target rejected inputs: " + ob.err;
    if (outcomes_equal(*oa, *ob)) continue;
    // A fuel disagreement may just mean the bound was too tight; retry big.
    bool fuel_involved = std::holds_alternative<OutOfFuel>(*oa) || std::holds_alternative<OutOfFuel>(*ob);
    if (fuel_involved) {
      size_t big = std::max(fuel * 64, static_cast<size_t>(4'000'000));
      oa = run(src, in, big);
      ob = run(tgt, in, big);
      if (outcomes_equal(*oa, *ob)) continue;
    }
    std::ostringstream os;
    os << "input " << k << ": source " << outcome_text(*oa) << " vs target " << outcome_text(*ob);
    return os.str();
  }
  return std::nullopt;
}

// Mutation ---------------------------------------------------------------------

namespace {

struct Mutator {
  Rng rng;
  const Program& after;
  std::vector<size_t> reach;  // reachable indices of `after`

  Mutator(uint64_t seed, const Program& a) : rng(seed), after(a) {
    for (size_t i : reachable(a)) reach.push_back(i);
  }

  std::optional<std::string> flip_branch(Program& prog) {
    std::vector<size_t> branches;
    for (size_t i : reach) {
      if (is_branch(prog.instrs[i])) branches.push_back(i);
    }
    if (branches.empty() || prog.n() < 2) return std::nullopt;
    size_t i = branches[rng.pick(branches.size())];
    size_t fresh = rng.pick(prog.n());
    std::ostringstream os;
    if (auto* g = std::get_if<Goto>(&prog.instrs[i])) {
      if (fresh == g->target) fresh = (fresh + 1) % prog.n();
      os << "after[" << i << "]: goto " << g->target << " -> " << fresh;
      g->target = fresh;
    } else {
      auto& cg = std::get<CondGoto>(prog.instrs[i]);
      size_t& arm = rng.chance(50) ? cg.t_true : cg.t_false;
      if (fresh == arm) fresh = (fresh + 1) % prog.n();
      os << "after[" << i << "]: branch arm " << arm << " -> " << fresh;
      arm = fresh;
    }
    return os.str();
  }

  static std::vector<Literal*> literals_of(Instruction& ins) {
    std::vector<Literal*> out;
    auto grab = [&](Operand& o) {
      if (auto* l = std::get_if<Literal>(&o)) out.push_back(l);
    };
    if (auto* x = std::get_if<Copy>(&ins)) grab(x->src);
    else if (auto* x = std::get_if<BinAssign>(&ins)) {
      grab(x->a);
      grab(x->b);
    } else if (auto* x = std::get_if<UnAssign>(&ins)) grab(x->a);
    else if (auto* x = std::get_if<ArrLoad>(&ins)) grab(x->idx);
    else if (auto* x = std::get_if<ArrStore>(&ins)) {
      grab(x->idx);
      grab(x->src);
    } else if (auto* x = std::get_if<CondGoto>(&ins)) {
      grab(x->cond.a);
      if (x->cond.cmp) grab(x->cond.b);
    }
    return out;
  }

  std::optional<std::string> flip_literal(Program& prog) {
    std::vector<std::pair<size_t, size_t>> sites;
    for (size_t i : reach) {
      size_t n = literals_of(prog.instrs[i]).size();
      for (size_t k = 0; k < n; ++k) sites.emplace_back(i, k);
    }
    if (sites.empty()) return std::nullopt;
    auto [i, k] = sites[rng.pick(sites.size())];
    Literal* lit = literals_of(prog.instrs[i])[k];
    std::ostringstream os;
    os << "after[" << i << "]: literal " << literal_text(*lit);
    if (lit->tag == TypeTag::Int) lit->i += rng.range(1, 3);
    else if (lit->tag == TypeTag::Float) lit->f = lit->f * 2.0 + 1.5;
    else lit->b = !lit->b;
    os << " -> " << literal_text(*lit);
    return os.str();
  }

  static std::optional<BinOp> swapped(BinOp op, Rng& rng) {
    switch (op) {
      case BinOp::Add: return BinOp::Sub;
      case BinOp::Sub: return rng.chance(50) ? BinOp::Add : BinOp::Mul;
      case BinOp::Mul: return BinOp::Add;
      case BinOp::Div: return BinOp::Mod;
      case BinOp::Mod: return BinOp::Div;
      case BinOp::Lt: return BinOp::Le;
      case BinOp::Le: return BinOp::Lt;
      case BinOp::Gt: return BinOp::Ge;
      case BinOp::Ge: return BinOp::Gt;
      case BinOp::Eq: return BinOp::Ne;
      case BinOp::Ne: return BinOp::Eq;
      case BinOp::And: return BinOp::Or;
      case BinOp::Or: return BinOp::And;
    }
    return std::nullopt;
  }

  std::optional<std::string> swap_op(Program& prog) {
    std::vector<size_t> sites;
    for (size_t i : reach) {
      if (std::holds_alternative<BinAssign>(prog.instrs[i])) sites.push_back(i);
      if (auto* cg = std::get_if<CondGoto>(&prog.instrs[i]); cg && cg->cond.cmp) sites.push_back(i);
    }
    if (sites.empty()) return std::nullopt;
    size_t i = sites[rng.pick(sites.size())];
    std::ostringstream os;
    if (auto* x = std::get_if<BinAssign>(&prog.instrs[i])) {
      auto op = swapped(x->op, rng);
      if (!op) return std::nullopt;
      os << "after[" << i << "]: op " << binop_text(x->op) << " -> " << binop_text(*op);
      x->op = *op;
    } else {
      auto& cg = std::get<CondGoto>(prog.instrs[i]);
      auto op = swapped(*cg.cond.cmp, rng);
      if (!op || !is_comparison(*op)) return std::nullopt;
      os << "after[" << i << "]: branch cmp " << binop_text(*cg.cond.cmp) << " -> "
         << binop_text(*op);
      cg.cond.cmp = op;
    }
    return os.str();
  }

  std::optional<std::string> delete_entry(Certificate& cert) {
    if (cert.entries.empty()) return std::nullopt;
    size_t k = rng.pick(cert.entries.size());
    auto it = std::next(cert.entries.begin(), static_cast<long>(k));
    std::ostringstream os;
    os << "cert: deleted entry (" << it->first.first << "," << it->first.second << ")";
    cert.entries.erase(it);
    return os.str();
  }

  std::optional<std::string> garble_entry(Certificate& cert, const Program& src) {
    if (cert.entries.empty()) return std::nullopt;
    size_t k = rng.pick(cert.entries.size());
    auto it = std::next(cert.entries.begin(), static_cast<long>(k));
    PointPair key = it->first;
    Invariant inv = it->second;
    PointPair fresh = key;
    if (rng.chance(50)) fresh.first = (key.first + 1 + rng.pick(src.n() - 1)) % src.n();
    else fresh.second = (key.second + 1 + rng.pick(after.n() - 1)) % after.n();
    if (cert.entries.count(fresh)) return std::nullopt;
    cert.entries.erase(key);
    cert.entries[fresh] = std::move(inv);
    std::ostringstream os;
    os << "cert: entry (" << key.first << "," << key.second << ") moved to (" << fresh.first << ","
       << fresh.second << ")";
    return os.str();
  }

  std::optional<std::string> false_atom(Certificate& cert, const Program& src) {
    if (cert.entries.empty()) return std::nullopt;
    std::vector<const VarInfo*> scalars;
    for (const VarInfo& v : src.vars) {
      if (is_scalar(v.type)) scalars.push_back(&v);
    }
    if (scalars.empty()) return std::nullopt;
    size_t k = rng.pick(cert.entries.size());
    auto it = std::next(cert.entries.begin(), static_cast<long>(k));
    const VarInfo* v = scalars[rng.pick(scalars.size())];
    Atom atom = Atom::eq_var(v->name, v->name);
    if (rng.chance(50)) {
      Literal lit = v->type == TypeTag::Int
                        ? Literal::of_int(rng.range(1, 40))
                        : (v->type == TypeTag::Float
                               ? Literal::of_float(static_cast<double>(rng.range(1, 9)))
                               : Literal::of_bool(rng.chance(50)));
      atom = Atom::const_src(v->name, lit);
    } else {
      // Equate two same-typed variables that the pass never promised equal.
      std::vector<const VarInfo*> peers;
      for (const VarInfo* w : scalars) {
        if (w->type == v->type) peers.push_back(w);
      }
      atom = Atom::eq_var(v->name, peers[rng.pick(peers.size())]->name);
    }
    it->second.add(atom);
    std::ostringstream os;
    os << "cert: added atom '" << atom_text(atom) << "' at (" << it->first.first << ","
       << it->first.second << ")";
    return os.str();
  }
};

}  // namespace

Mutation mutate(const PassResult& r, const Certificate& cert, uint64_t seed, MutationClass cls) {
  Mutation m{r, cert, "none"};
  Mutator mu(seed, r.after);
  size_t kinds = cls == MutationClass::SemanticsOnly ? 2 : 6;
  // Kinds may be inapplicable for a given program; rotate until one lands.
  size_t first = mu.rng.pick(kinds);
  for (size_t d = 0; d < kinds; ++d) {
    size_t kind = (first + d) % kinds;
    std::optional<std::string> site;
    switch (kind) {
      case 0: site = mu.flip_literal(m.result.after); break;
      case 1: site = mu.flip_branch(m.result.after); break;
      case 2: site = mu.swap_op(m.result.after); break;
      case 3: site = mu.false_atom(m.cert, r.before); break;
      case 4: site = mu.delete_entry(m.cert); break;
      case 5: site = mu.garble_entry(m.cert, r.before); break;
    }
    if (site) {
      m.site = *site;
      return m;
    }
  }
  return m;
}

// Fuzzing -----------------------------------------------------------------------

FuzzReport fuzz(size_t trials, uint64_t seed, const FuzzOptions& opts) {
  FuzzReport report;
  report.trials = trials;
  Rng master(seed);
  constexpr size_t kDiffFuel = 32768;

  for (size_t t = 0; t < trials; ++t) {
    uint64_t prog_seed = master.raw();
    size_t budget = 8 + master.pick(opts.program_budget);
    Program p = gen_random_program(prog_seed, budget);

    static const PassKind kPasses[] = {PassKind::Uce, PassKind::Dae, PassKind::UceDae,
                                       PassKind::Cp};
    PassKind kind = kPasses[master.pick(4)];
    PassResult r = run_pass(kind, p);
    Certificate cert = gen_cert_for(kind, r);
    Verdict honest = check(r.before, r.after, cert, opts.check);
    if (!honest.accepted) {
      std::ostringstream os;
      os << "trial " << t << " (seed " << prog_seed << ", pass " << pass_name(kind)
         << "): honest certificate rejected at (" << honest.entry.first << ","
         << honest.entry.second << "): " << honest.reason;
      report.honest_failures.push_back(os.str());
      continue;
    }
    ++report.accepted_honest;

    Mutation m = mutate(r, cert, master.raw());
    Verdict v = check(m.result.before, m.result.after, m.cert, opts.check);
    if (!v.accepted) {
      ++report.rejected_mutant;
      continue;
    }
    auto div = differential(p, m.result.after, opts.diff_inputs, master.raw(), kDiffFuel);
    if (div) {
      ++report.soundness_violations;
      std::ostringstream os;
      os << "trial " << t << " (seed " << prog_seed << ", pass " << pass_name(kind) << ", "
         << m.site << "): " << *div;
      report.violation_sites.push_back(os.str());
    } else {
      ++report.accepted_mutant_equivalent;
    }
  }
  return report;
}

}  // namespace tacc
