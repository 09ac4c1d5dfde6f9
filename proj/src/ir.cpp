#include "tacc/ir.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace tacc {

bool is_scalar(TypeTag t) {
  return t == TypeTag::Int || t == TypeTag::Float || t == TypeTag::Bool;
}

bool is_array(TypeTag t) { return !is_scalar(t); }

TypeTag elem_type(TypeTag t) {
  switch (t) {
    case TypeTag::ArrInt: return TypeTag::Int;
    case TypeTag::ArrFloat: return TypeTag::Float;
    case TypeTag::ArrBool: return TypeTag::Bool;
    default: return t;
  }
}

TypeTag array_of(TypeTag t) {
  switch (t) {
    case TypeTag::Int: return TypeTag::ArrInt;
    case TypeTag::Float: return TypeTag::ArrFloat;
    case TypeTag::Bool: return TypeTag::ArrBool;
    default: return t;
  }
}

std::string type_name(TypeTag t) {
  switch (t) {
    case TypeTag::Int: return "Int";
    case TypeTag::Float: return "Float";
    case TypeTag::Bool: return "Bool";
    case TypeTag::ArrInt: return "ArrInt";
    case TypeTag::ArrFloat: return "ArrFloat";
    case TypeTag::ArrBool: return "ArrBool";
  }
  return "?";
}

Literal Literal::zero_of(TypeTag t) {
  switch (t) {
    case TypeTag::Float: return of_float(0.0);
    case TypeTag::Bool: return of_bool(false);
    default: return of_int(0);
  }
}

bool Literal::operator==(const Literal& o) const {
  if (tag != o.tag) return false;
  switch (tag) {
    case TypeTag::Int: return i == o.i;
    case TypeTag::Float: return std::bit_cast<uint64_t>(f) == std::bit_cast<uint64_t>(o.f);
    case TypeTag::Bool: return b == o.b;
    default: return false;
  }
}

bool Literal::operator<(const Literal& o) const {
  if (tag != o.tag) return tag < o.tag;
  switch (tag) {
    case TypeTag::Int: return i < o.i;
    case TypeTag::Float: return std::bit_cast<uint64_t>(f) < std::bit_cast<uint64_t>(o.f);
    case TypeTag::Bool: return b < o.b;
    default: return false;
  }
}

std::string literal_text(const Literal& l) {
  switch (l.tag) {
    case TypeTag::Int: return int_to_text(l.i);
    case TypeTag::Float: return double_to_text(l.f);
    case TypeTag::Bool: return l.b ? "true" : "false";
    default: return "?";
  }
}

bool is_var(const Operand& o) { return std::holds_alternative<VarRef>(o); }

const std::string* var_of(const Operand& o) {
  if (auto* v = std::get_if<VarRef>(&o)) return &v->name;
  return nullptr;
}

Operand var_operand(std::string name) { return VarRef{std::move(name)}; }
Operand lit_operand(Literal l) { return l; }

bool is_comparison(BinOp op) {
  switch (op) {
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge:
    case BinOp::Eq:
    case BinOp::Ne:
      return true;
    default:
      return false;
  }
}

std::string binop_text(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "and";
    case BinOp::Or: return "or";
  }
  return "?";
}

std::string unop_text(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "-";
    case UnOp::Not: return "not";
    case UnOp::IntToFloat: return "int_to_float";
  }
  return "?";
}

const VarInfo* Program::find_var(std::string_view name) const {
  auto it = var_index_.find(std::string(name));
  if (it == var_index_.end()) return nullptr;
  return &vars[it->second];
}

bool Program::is_output(std::string_view name) const {
  return std::find(outputs.begin(), outputs.end(), name) != outputs.end();
}

void Program::add_var(VarInfo v) {
  var_index_[v.name] = vars.size();
  vars.push_back(std::move(v));
}

namespace {

void add_use(std::vector<std::string>& uses, const Operand& o) {
  if (auto* name = var_of(o)) uses.push_back(*name);
}

struct Checker {
  const Program& p;
  std::vector<std::string>& out;
  size_t i;

  void fail(const std::string& msg) {
    std::ostringstream os;
    os << "instr " << i << ": " << msg;
    out.push_back(os.str());
  }

  // Returns the operand type, reporting undeclared names once.
  std::optional<TypeTag> typed(const Operand& o) {
    if (auto* name = var_of(o)) {
      const VarInfo* vi = p.find_var(*name);
      if (!vi) {
        fail("undeclared variable " + *name);
        return std::nullopt;
      }
      return vi->type;
    }
    return std::get<Literal>(o).tag;
  }

  void expect_scalar_operand(const Operand& o, TypeTag want, const char* role) {
    auto t = typed(o);
    if (!t) return;
    if (*t != want) fail(std::string(role) + " has type " + type_name(*t) + ", expected " + type_name(want));
  }

  std::optional<TypeTag> scalar_dst(const std::string& dst) {
    const VarInfo* vi = p.find_var(dst);
    if (!vi) {
      fail("undeclared variable " + dst);
      return std::nullopt;
    }
    if (!is_scalar(vi->type)) {
      fail("destination " + dst + " is not scalar");
      return std::nullopt;
    }
    return vi->type;
  }

  void check_target(size_t t) {
    if (t >= p.n()) {
      std::ostringstream os;
      os << "target " << t << " out of range (N=" << p.n() << ")";
      fail(os.str());
    }
  }

  void check_cond(const BranchCond& c) {
    if (!c.cmp) {
      expect_scalar_operand(c.a, TypeTag::Bool, "condition");
      return;
    }
    if (!is_comparison(*c.cmp)) {
      fail("branch condition op is not a comparison");
      return;
    }
    auto ta = typed(c.a), tb = typed(c.b);
    if (!ta || !tb) return;
    if (*ta != *tb) {
      fail("comparison operand types differ: " + type_name(*ta) + " vs " + type_name(*tb));
      return;
    }
    if (!is_scalar(*ta)) fail("comparison operands must be scalar");
    if (*ta == TypeTag::Bool && *c.cmp != BinOp::Eq && *c.cmp != BinOp::Ne)
      fail("ordering comparison on Bool");
  }

  void check_bin(const BinAssign& a) {
    auto dst = scalar_dst(a.dst);
    auto ta = typed(a.a), tb = typed(a.b);
    if (!dst || !ta || !tb) return;
    switch (a.op) {
      case BinOp::Add:
      case BinOp::Sub:
      case BinOp::Mul:
      case BinOp::Div:
      case BinOp::Mod:
        if (*ta != *tb || (*ta != TypeTag::Int && *ta != TypeTag::Float))
          fail("arithmetic operands must both be Int or both Float");
        else if (*dst != *ta)
          fail("destination type " + type_name(*dst) + " does not match operand type " + type_name(*ta));
        break;
      case BinOp::Lt:
      case BinOp::Le:
      case BinOp::Gt:
      case BinOp::Ge:
        if (*ta != *tb || (*ta != TypeTag::Int && *ta != TypeTag::Float))
          fail("ordering comparison operands must both be Int or both Float");
        else if (*dst != TypeTag::Bool)
          fail("comparison destination must be Bool");
        break;
      case BinOp::Eq:
      case BinOp::Ne:
        if (*ta != *tb || !is_scalar(*ta))
          fail("equality operands must be scalars of one type");
        else if (*dst != TypeTag::Bool)
          fail("comparison destination must be Bool");
        break;
      case BinOp::And:
      case BinOp::Or:
        if (*ta != TypeTag::Bool || *tb != TypeTag::Bool || *dst != TypeTag::Bool)
          fail("boolean op requires Bool operands and destination");
        break;
    }
  }

  void check_un(const UnAssign& a) {
    auto dst = scalar_dst(a.dst);
    auto ta = typed(a.a);
    if (!dst || !ta) return;
    switch (a.op) {
      case UnOp::Neg:
        if (*ta != TypeTag::Int && *ta != TypeTag::Float) fail("neg takes Int or Float");
        else if (*dst != *ta) fail("neg destination type mismatch");
        break;
      case UnOp::Not:
        if (*ta != TypeTag::Bool || *dst != TypeTag::Bool) fail("not takes and yields Bool");
        break;
      case UnOp::IntToFloat:
        if (*ta != TypeTag::Int || *dst != TypeTag::Float) fail("int_to_float takes Int and yields Float");
        break;
    }
  }

  const VarInfo* array_var(const std::string& name) {
    const VarInfo* vi = p.find_var(name);
    if (!vi) {
      fail("undeclared variable " + name);
      return nullptr;
    }
    if (!is_array(vi->type)) {
      fail(name + " is not an array");
      return nullptr;
    }
    return vi;
  }
};

}  // namespace

std::vector<std::string> validate(const Program& p) {
  std::vector<std::string> out;
  if (p.instrs.empty()) {
    out.push_back("program has no instructions");
    return out;
  }
  for (const VarInfo& v : p.vars) {
    if (is_array(v.type) && v.array_len <= 0)
      out.push_back("var " + v.name + ": array length must be positive");
    if (is_scalar(v.type) && v.array_len != 0)
      out.push_back("var " + v.name + ": scalar with array length");
  }
  for (const std::string& o : p.outputs) {
    if (!p.find_var(o)) out.push_back("output " + o + " undeclared");
  }
  for (size_t i = 0; i < p.n(); ++i) {
    Checker c{p, out, i};
    const Instruction& ins = p.instrs[i];
    if (auto* x = std::get_if<Copy>(&ins)) {
      auto dst = c.scalar_dst(x->dst);
      auto src = c.typed(x->src);
      if (dst && src && *dst != *src)
        c.fail("copy from " + type_name(*src) + " to " + type_name(*dst));
    } else if (auto* x = std::get_if<BinAssign>(&ins)) {
      c.check_bin(*x);
    } else if (auto* x = std::get_if<UnAssign>(&ins)) {
      c.check_un(*x);
    } else if (auto* x = std::get_if<ArrLoad>(&ins)) {
      auto dst = c.scalar_dst(x->dst);
      const VarInfo* arr = c.array_var(x->arr);
      c.expect_scalar_operand(x->idx, TypeTag::Int, "index");
      if (dst && arr && *dst != elem_type(arr->type))
        c.fail("load destination type does not match element type of " + x->arr);
    } else if (auto* x = std::get_if<ArrStore>(&ins)) {
      const VarInfo* arr = c.array_var(x->arr);
      c.expect_scalar_operand(x->idx, TypeTag::Int, "index");
      if (arr) c.expect_scalar_operand(x->src, elem_type(arr->type), "stored value");
    } else if (auto* x = std::get_if<Goto>(&ins)) {
      c.check_target(x->target);
    } else if (auto* x = std::get_if<CondGoto>(&ins)) {
      c.check_cond(x->cond);
      c.check_target(x->t_true);
      c.check_target(x->t_false);
    }
    // Halt/Noop carry nothing to check.
    bool falls_through = !std::holds_alternative<Goto>(ins) &&
                         !std::holds_alternative<CondGoto>(ins) &&
                         !std::holds_alternative<Halt>(ins);
    if (falls_through && i + 1 == p.n()) c.fail("falls through past end of program");
  }
  return out;
}

std::vector<size_t> successors(const Program& p, size_t i) {
  const Instruction& ins = p.instrs[i];
  if (auto* g = std::get_if<Goto>(&ins)) return {g->target};
  if (auto* cg = std::get_if<CondGoto>(&ins)) {
    if (cg->t_true == cg->t_false) return {cg->t_true};
    if (cg->t_true < cg->t_false) return {cg->t_true, cg->t_false};
    return {cg->t_false, cg->t_true};
  }
  if (std::holds_alternative<Halt>(ins)) return {};
  return {i + 1};
}

std::vector<std::vector<size_t>> predecessors(const Program& p) {
  std::vector<std::vector<size_t>> preds(p.n());
  for (size_t i = 0; i < p.n(); ++i) {
    for (size_t s : successors(p, i)) {
      if (s < p.n()) preds[s].push_back(i);
    }
  }
  return preds;
}

namespace {
void add_cond_uses(std::vector<std::string>& uses, const BranchCond& c) {
  add_use(uses, c.a);
  if (c.cmp) add_use(uses, c.b);
}
}  // namespace

DefsUses defs_uses(const Instruction& ins) {
  DefsUses r;
  if (auto* x = std::get_if<Copy>(&ins)) {
    r.def = x->dst;
    add_use(r.uses, x->src);
  } else if (auto* x = std::get_if<BinAssign>(&ins)) {
    r.def = x->dst;
    add_use(r.uses, x->a);
    add_use(r.uses, x->b);
  } else if (auto* x = std::get_if<UnAssign>(&ins)) {
    r.def = x->dst;
    add_use(r.uses, x->a);
  } else if (auto* x = std::get_if<ArrLoad>(&ins)) {
    r.def = x->dst;
    r.uses.push_back(x->arr);  // reading the array uses its name
    add_use(r.uses, x->idx);
  } else if (auto* x = std::get_if<ArrStore>(&ins)) {
    add_use(r.uses, x->idx);
    add_use(r.uses, x->src);
    r.array_written = x->arr;
  } else if (auto* x = std::get_if<CondGoto>(&ins)) {
    add_cond_uses(r.uses, x->cond);
  }
  std::sort(r.uses.begin(), r.uses.end());
  r.uses.erase(std::unique(r.uses.begin(), r.uses.end()), r.uses.end());
  return r;
}

bool is_branch(const Instruction& ins) {
  return std::holds_alternative<Goto>(ins) || std::holds_alternative<CondGoto>(ins);
}

bool is_pure_assign(const Instruction& ins) {
  return std::holds_alternative<Copy>(ins) || std::holds_alternative<BinAssign>(ins) ||
         std::holds_alternative<UnAssign>(ins);
}

Result<Retargeted> retarget(const Program& p, const std::set<size_t>& keep) {
  if (keep.empty()) return Result<Retargeted>::failure("keep set is empty");
  if (!keep.count(0)) return Result<Retargeted>::failure("keep set must contain instruction 0");
  for (size_t i : keep) {
    if (i >= p.n()) return Result<Retargeted>::failure("keep index " + std::to_string(i) + " out of range");
  }
  // Every successor of a kept instruction must itself be kept; dropping a
  // fall-through or branch target silently would change control flow.
  for (size_t i : keep) {
    for (size_t s : successors(p, i)) {
      if (s >= p.n() || !keep.count(s)) {
        std::ostringstream os;
        os << "instruction " << i << "'s successor " << s << " is not kept";
        return Result<Retargeted>::failure(os.str());
      }
    }
  }

  Retargeted out;
  size_t next = 0;
  for (size_t i : keep) out.index_map[i] = next++;

  out.program.vars = p.vars;
  out.program.outputs = p.outputs;
  Program rebuilt;
  for (const VarInfo& v : p.vars) rebuilt.add_var(v);
  rebuilt.outputs = p.outputs;
  for (size_t i : keep) {
    Instruction ins = p.instrs[i];
    if (auto* g = std::get_if<Goto>(&ins)) {
      g->target = out.index_map.at(g->target);
    } else if (auto* cg = std::get_if<CondGoto>(&ins)) {
      cg->t_true = out.index_map.at(cg->t_true);
      cg->t_false = out.index_map.at(cg->t_false);
    }
    rebuilt.instrs.push_back(std::move(ins));
  }
  out.program = std::move(rebuilt);
  return Result<Retargeted>::success(std::move(out));
}

}  // namespace tacc
