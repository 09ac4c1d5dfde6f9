#include "tacc/interp.hpp"

#include <cassert>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tacc {

bool value_matches(const VarInfo& vi, const Value& v) {
  if (auto* lit = std::get_if<Literal>(&v)) return is_scalar(vi.type) && lit->tag == vi.type;
  const ArrayVal& a = std::get<ArrayVal>(v);
  if (!is_array(vi.type) || a.elem != elem_type(vi.type)) return false;
  if (static_cast<int64_t>(a.elems.size()) != vi.array_len) return false;
  for (const Literal& e : a.elems) {
    if (e.tag != a.elem) return false;
  }
  return true;
}

Value default_value(const VarInfo& vi) {
  if (is_scalar(vi.type)) return Literal::zero_of(vi.type);
  ArrayVal a;
  a.elem = elem_type(vi.type);
  a.elems.assign(static_cast<size_t>(vi.array_len), Literal::zero_of(a.elem));
  return a;
}

std::string value_text(const Value& v) {
  if (auto* lit = std::get_if<Literal>(&v)) return literal_text(*lit);
  const ArrayVal& a = std::get<ArrayVal>(v);
  std::string s = "[";
  for (size_t i = 0; i < a.elems.size(); ++i) {
    if (i) s += ",";
    s += literal_text(a.elems[i]);
  }
  s += "]";
  return s;
}

namespace {

size_t slot_of(const Program& p, std::string_view name) {
  for (size_t i = 0; i < p.vars.size(); ++i) {
    if (p.vars[i].name == name) return i;
  }
  throw std::runtime_error("no such variable: " + std::string(name));
}

}  // namespace

const Value& Store::get(std::string_view name) const { return slots[slot_of(*prog, name)]; }
void Store::set(std::string_view name, Value v) { slots[slot_of(*prog, name)] = std::move(v); }

bool outcomes_equal(const Outcome& a, const Outcome& b) {
  if (a.index() != b.index()) return false;
  if (auto* ha = std::get_if<Halted>(&a)) return *ha == std::get<Halted>(b);
  if (auto* fa = std::get_if<Fault>(&a)) return fa->kind == std::get<Fault>(b).kind;
  return true;
}

std::string outcome_text(const Outcome& o) {
  if (auto* h = std::get_if<Halted>(&o)) {
    std::string s = "halted";
    for (const auto& [name, v] : h->outputs) s += " " + name + "=" + value_text(v);
    return s;
  }
  if (auto* f = std::get_if<Fault>(&o)) {
    std::ostringstream os;
    os << "fault " << fault_name(f->kind) << " at " << f->at;
    return os.str();
  }
  return "out of fuel";
}

Result<Store> init_store(const Program& p, const Inputs& inputs) {
  Store s;
  s.prog = &p;
  s.pc = 0;
  s.slots.reserve(p.vars.size());
  for (const VarInfo& vi : p.vars) {
    if (vi.is_input) {
      auto it = inputs.find(vi.name);
      if (it == inputs.end()) return Result<Store>::failure(vi.name + ": missing input");
      if (!value_matches(vi, it->second))
        return Result<Store>::failure(vi.name + ": expected " + type_name(vi.type));
      s.slots.push_back(it->second);
    } else {
      s.slots.push_back(default_value(vi));
    }
  }
  for (const auto& [name, v] : inputs) {
    const VarInfo* vi = p.find_var(name);
    if (!vi) return Result<Store>::failure(name + ": not declared");
    if (!vi->is_input) return Result<Store>::failure(name + ": not an input");
  }
  return Result<Store>::success(std::move(s));
}

// Execution core over resolved slots ----------------------------------------
//
// Operands are resolved to slot indices once so repeated runs do not pay for
// name lookups; `step` and `run` share this code path.

namespace {

struct SlotOperand {
  bool is_lit = true;
  Literal lit;
  size_t slot = 0;
};

struct ExecCtx {
  const Program& p;
  std::unordered_map<std::string, size_t> index;

  explicit ExecCtx(const Program& prog) : p(prog) {
    for (size_t i = 0; i < p.vars.size(); ++i) index[p.vars[i].name] = i;
  }

  SlotOperand resolve(const Operand& o) const {
    if (auto* name = var_of(o)) return SlotOperand{false, {}, index.at(*name)};
    return SlotOperand{true, std::get<Literal>(o), 0};
  }

  size_t slot(const std::string& name) const { return index.at(name); }
};

Literal load(const std::vector<Value>& slots, const SlotOperand& o) {
  if (o.is_lit) return o.lit;
  return std::get<Literal>(slots[o.slot]);
}

struct StepEffect {
  std::optional<Outcome> done;
  size_t next_pc = 0;
};

StepEffect exec_one(const ExecCtx& ctx, std::vector<Value>& slots, size_t pc) {
  const Instruction& ins = ctx.p.instrs[pc];
  StepEffect eff;
  eff.next_pc = pc + 1;

  if (auto* x = std::get_if<Copy>(&ins)) {
    slots[ctx.slot(x->dst)] = load(slots, ctx.resolve(x->src));
  } else if (auto* x = std::get_if<BinAssign>(&ins)) {
    Literal a = load(slots, ctx.resolve(x->a));
    Literal b = load(slots, ctx.resolve(x->b));
    EvalResult r = eval_binop(x->op, a, b);
    if (auto* fault = std::get_if<FaultKind>(&r)) {
      eff.done = Fault{*fault, pc};
      return eff;
    }
    slots[ctx.slot(x->dst)] = std::get<Literal>(r);
  } else if (auto* x = std::get_if<UnAssign>(&ins)) {
    slots[ctx.slot(x->dst)] = eval_unop(x->op, load(slots, ctx.resolve(x->a)));
  } else if (auto* x = std::get_if<ArrLoad>(&ins)) {
    Literal idx = load(slots, ctx.resolve(x->idx));
    ArrayVal& arr = std::get<ArrayVal>(slots[ctx.slot(x->arr)]);
    if (idx.i < 0 || idx.i >= static_cast<int64_t>(arr.elems.size())) {
      eff.done = Fault{FaultKind::OutOfBounds, pc};
      return eff;
    }
    slots[ctx.slot(x->dst)] = arr.elems[static_cast<size_t>(idx.i)];
  } else if (auto* x = std::get_if<ArrStore>(&ins)) {
    Literal idx = load(slots, ctx.resolve(x->idx));
    Literal v = load(slots, ctx.resolve(x->src));
    ArrayVal& arr = std::get<ArrayVal>(slots[ctx.slot(x->arr)]);
    if (idx.i < 0 || idx.i >= static_cast<int64_t>(arr.elems.size())) {
      eff.done = Fault{FaultKind::OutOfBounds, pc};
      return eff;
    }
    arr.elems[static_cast<size_t>(idx.i)] = v;
  } else if (auto* x = std::get_if<Goto>(&ins)) {
    eff.next_pc = x->target;
  } else if (auto* x = std::get_if<CondGoto>(&ins)) {
    bool taken;
    if (!x->cond.cmp) {
      taken = load(slots, ctx.resolve(x->cond.a)).b;
    } else {
      Literal a = load(slots, ctx.resolve(x->cond.a));
      Literal b = load(slots, ctx.resolve(x->cond.b));
      taken = std::get<Literal>(eval_binop(*x->cond.cmp, a, b)).b;
    }
    eff.next_pc = taken ? x->t_true : x->t_false;
  } else if (std::holds_alternative<Halt>(ins)) {
    Halted h;
    for (const std::string& name : ctx.p.outputs) h.outputs.emplace_back(name, slots[ctx.slot(name)]);
    eff.done = std::move(h);
  }
  // Noop only advances pc.
  return eff;
}

}  // namespace

std::variant<Store, Outcome> step(const Program& p, const Store& s) {
  assert(s.pc < p.n());
  ExecCtx ctx(p);
  Store next = s;
  StepEffect eff = exec_one(ctx, next.slots, s.pc);
  if (eff.done) return *eff.done;
  next.pc = eff.next_pc;
  return next;
}

Result<Outcome> run(const Program& p, const Inputs& inputs, size_t fuel) {
  Result<Store> init = init_store(p, inputs);
  if (!init.ok()) return Result<Outcome>::failure(init.err);
  ExecCtx ctx(p);
  std::vector<Value> slots = std::move(init->slots);
  size_t pc = 0;
  for (size_t used = 0; used < fuel; ++used) {
    StepEffect eff = exec_one(ctx, slots, pc);
    if (eff.done) return Result<Outcome>::success(std::move(*eff.done));
    pc = eff.next_pc;
  }
  return Result<Outcome>::success(OutOfFuel{});
}

}  // namespace tacc
