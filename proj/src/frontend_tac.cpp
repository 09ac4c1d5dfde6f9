// Printer and parser for the .tac interchange format.
#include <cassert>
#include <cctype>
#include <cmath>
#include <sstream>

#include "tacc/frontend.hpp"

namespace tacc {

namespace {

std::string operand_text(const Operand& o) {
  if (auto* name = var_of(o)) return *name;
  return literal_text(std::get<Literal>(o));
}

std::string cond_text(const BranchCond& c) {
  if (!c.cmp) return operand_text(c.a);
  return operand_text(c.a) + " " + binop_text(*c.cmp) + " " + operand_text(c.b);
}

std::string instr_text(const Instruction& ins) {
  std::ostringstream os;
  if (auto* x = std::get_if<Copy>(&ins)) {
    os << x->dst << " := " << operand_text(x->src);
  } else if (auto* x = std::get_if<BinAssign>(&ins)) {
    os << x->dst << " := " << operand_text(x->a) << " " << binop_text(x->op) << " "
       << operand_text(x->b);
  } else if (auto* x = std::get_if<UnAssign>(&ins)) {
    os << x->dst << " := " << unop_text(x->op) << " " << operand_text(x->a);
  } else if (auto* x = std::get_if<ArrLoad>(&ins)) {
    os << x->dst << " := " << x->arr << "[" << operand_text(x->idx) << "]";
  } else if (auto* x = std::get_if<ArrStore>(&ins)) {
    os << x->arr << "[" << operand_text(x->idx) << "] := " << operand_text(x->src);
  } else if (auto* x = std::get_if<Goto>(&ins)) {
    os << "goto " << x->target;
  } else if (auto* x = std::get_if<CondGoto>(&ins)) {
    os << "if " << cond_text(x->cond) << " goto " << x->t_true << " else " << x->t_false;
  } else if (std::holds_alternative<Halt>(ins)) {
    os << "halt";
  } else {
    os << "noop";
  }
  return os.str();
}

std::string type_text(TypeTag t) {
  switch (elem_type(t)) {
    case TypeTag::Int: return "int";
    case TypeTag::Float: return "float";
    case TypeTag::Bool: return "bool";
    default: return "?";
  }
}

std::string tac_body(const Program& p) {
  std::ostringstream os;
  for (const VarInfo& v : p.vars) {
    os << "decl " << type_text(v.type) << " " << v.name;
    if (is_array(v.type)) os << "[" << v.array_len << "]";
    if (v.is_input) os << " in";
    if (p.is_output(v.name)) os << " out";
    os << "\n";
  }
  for (size_t i = 0; i < p.n(); ++i) os << i << ": " << instr_text(p.instrs[i]) << "\n";
  return os.str();
}

}  // namespace

std::string print_tac(const Program& p) {
  std::string body = tac_body(p);
  uint64_t h = fnv1a_bytes(fnv1a_init(), body);
  return "tac v1 hash=" + to_hex(h) + "\n" + body;
}

// Parsing ---------------------------------------------------------------------

namespace {

struct Tok {
  enum class Kind { Ident, Int, Float, Bool, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  Literal lit;
};

// Line-level tokenizer. A '-' directly followed by a digit, '.', "inf" or
// "nan" begins a negative literal; with whitespace after it, it is the
// operator token.
class LineLexer {
 public:
  explicit LineLexer(std::string_view s) : s_(s) {}

  Result<std::vector<Tok>> lex() {
    std::vector<Tok> out;
    while (true) {
      skip_ws();
      if (pos_ >= s_.size()) break;
      char c = s_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '%') {
        out.push_back(ident());
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        auto t = number(false);
        if (!t.ok()) return Result<std::vector<Tok>>::failure(t.err);
        out.push_back(*t);
      } else if (c == '-' && pos_ + 1 < s_.size() && starts_literal(pos_ + 1)) {
        ++pos_;
        auto t = number(true);
        if (!t.ok()) return Result<std::vector<Tok>>::failure(t.err);
        out.push_back(*t);
      } else {
        auto t = punct();
        if (!t.ok()) return Result<std::vector<Tok>>::failure(t.err);
        out.push_back(*t);
      }
    }
    out.push_back(Tok{Tok::Kind::End, "", {}});
    return Result<std::vector<Tok>>::success(std::move(out));
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool starts_literal(size_t at) const {
    char c = s_[at];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return true;
    return s_.substr(at, 3) == "inf" || s_.substr(at, 3) == "nan";
  }

  Tok ident() {
    size_t start = pos_;
    ++pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    std::string text(s_.substr(start, pos_ - start));
    if (text == "true") return Tok{Tok::Kind::Bool, text, Literal::of_bool(true)};
    if (text == "false") return Tok{Tok::Kind::Bool, text, Literal::of_bool(false)};
    if (text == "inf") return Tok{Tok::Kind::Float, text, Literal::of_float(HUGE_VAL)};
    if (text == "nan") return Tok{Tok::Kind::Float, text, Literal::of_float(std::nan(""))};
    return Tok{Tok::Kind::Ident, text, {}};
  }

  Result<Tok> number(bool negative) {
    if (s_.substr(pos_, 3) == "inf") {
      pos_ += 3;
      return Result<Tok>::success(
          Tok{Tok::Kind::Float, "inf", Literal::of_float(negative ? -HUGE_VAL : HUGE_VAL)});
    }
    if (s_.substr(pos_, 3) == "nan") {
      pos_ += 3;
      return Result<Tok>::success(
          Tok{Tok::Kind::Float, "nan", Literal::of_float(negative ? -std::nan("") : std::nan(""))});
    }
    size_t start = pos_;
    bool is_float = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '.') {
        is_float = true;
        ++pos_;
      } else if (c == 'e' || c == 'E') {
        is_float = true;
        ++pos_;
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      } else {
        break;
      }
    }
    std::string text(s_.substr(start, pos_ - start));
    if (is_float) {
      auto v = double_from_text(text);
      if (!v) return Result<Tok>::failure("bad float literal " + text);
      return Result<Tok>::success(
          Tok{Tok::Kind::Float, text, Literal::of_float(negative ? -*v : *v)});
    }
    auto v = int_from_text(text);
    if (!v) return Result<Tok>::failure("bad int literal " + text);
    return Result<Tok>::success(Tok{Tok::Kind::Int, text, Literal::of_int(negative ? -*v : *v)});
  }

  Result<Tok> punct() {
    static const char* two[] = {":=", "<=", ">=", "==", "!="};
    for (const char* t : two) {
      if (s_.substr(pos_, 2) == t) {
        pos_ += 2;
        return Result<Tok>::success(Tok{Tok::Kind::Punct, t, {}});
      }
    }
    char c = s_[pos_];
    std::string one(1, c);
    if (std::string("+-*/%<>:[]()").find(c) != std::string::npos) {
      ++pos_;
      return Result<Tok>::success(Tok{Tok::Kind::Punct, one, {}});
    }
    return Result<Tok>::failure(std::string("unexpected character '") + c + "'");
  }
};

struct TacParser {
  Program prog;
  std::string error;
  size_t lineno = 0;

  bool fail(const std::string& msg) {
    error = "line " + std::to_string(lineno) + ": " + msg;
    return false;
  }

  // Out-of-range access yields the End sentinel so lookahead is always safe.
  static const Tok& at(const std::vector<Tok>& t, size_t i) {
    static const Tok end{Tok::Kind::End, "", {}};
    return i < t.size() ? t[i] : end;
  }

  static bool is_operand(const Tok& t) {
    return t.kind == Tok::Kind::Ident || t.kind == Tok::Kind::Int || t.kind == Tok::Kind::Float ||
           t.kind == Tok::Kind::Bool;
  }

  Operand operand(const Tok& t) {
    if (t.kind == Tok::Kind::Ident) return var_operand(t.text);
    return lit_operand(t.lit);
  }

  static std::optional<BinOp> binop_from(const std::string& s) {
    if (s == "+") return BinOp::Add;
    if (s == "-") return BinOp::Sub;
    if (s == "*") return BinOp::Mul;
    if (s == "/") return BinOp::Div;
    if (s == "%") return BinOp::Mod;
    if (s == "<") return BinOp::Lt;
    if (s == "<=") return BinOp::Le;
    if (s == ">") return BinOp::Gt;
    if (s == ">=") return BinOp::Ge;
    if (s == "==") return BinOp::Eq;
    if (s == "!=") return BinOp::Ne;
    if (s == "and") return BinOp::And;
    if (s == "or") return BinOp::Or;
    return std::nullopt;
  }

  bool parse_decl(const std::vector<Tok>& t) {
    size_t i = 1;
    if (at(t, i).kind != Tok::Kind::Ident) return fail("expected type after decl");
    TypeTag base;
    if (at(t, i).text == "int") base = TypeTag::Int;
    else if (at(t, i).text == "float") base = TypeTag::Float;
    else if (at(t, i).text == "bool") base = TypeTag::Bool;
    else return fail("unknown type " + at(t, i).text);
    ++i;
    if (at(t, i).kind != Tok::Kind::Ident) return fail("expected variable name");
    VarInfo v;
    v.name = at(t, i).text;
    v.type = base;
    ++i;
    if (at(t, i).text == "[") {
      if (at(t, i + 1).kind != Tok::Kind::Int || at(t, i + 2).text != "]") return fail("expected [<len>]");
      v.type = array_of(base);
      v.array_len = at(t, i + 1).lit.i;
      i += 3;
    }
    bool out = false;
    while (at(t, i).kind == Tok::Kind::Ident) {
      if (at(t, i).text == "in") v.is_input = true;
      else if (at(t, i).text == "out") out = true;
      else return fail("unexpected marker " + at(t, i).text);
      ++i;
    }
    if (at(t, i).kind != Tok::Kind::End) return fail("trailing tokens in decl");
    if (prog.find_var(v.name)) return fail("duplicate declaration of " + v.name);
    if (out) prog.outputs.push_back(v.name);
    prog.add_var(std::move(v));
    return true;
  }

  bool parse_cond(const std::vector<Tok>& t, size_t& i, BranchCond& cond) {
    if (!is_operand(at(t, i))) return fail("expected condition operand");
    Operand a = operand(at(t, i));
    ++i;
    auto op = binop_from(at(t, i).text);
    if (at(t, i).kind == Tok::Kind::Punct && op && is_comparison(*op)) {
      ++i;
      if (!is_operand(at(t, i))) return fail("expected comparison operand");
      cond = BranchCond::compare(*op, std::move(a), operand(at(t, i)));
      ++i;
      return true;
    }
    cond = BranchCond::bare(std::move(a));
    return true;
  }

  bool parse_instr(const std::vector<Tok>& t) {
    // <idx> : <form>
    if (at(t, 0).kind != Tok::Kind::Int || at(t, 1).text != ":") return fail("expected '<index>:'");
    if (at(t, 0).lit.i != static_cast<int64_t>(prog.n()))
      return fail("expected index " + std::to_string(prog.n()));
    size_t i = 2;

    if (at(t, i).text == "goto") {
      if (at(t, i + 1).kind != Tok::Kind::Int || at(t, i + 1).lit.i < 0) return fail("expected goto target");
      if (at(t, i + 2).kind != Tok::Kind::End) return fail("trailing tokens");
      prog.instrs.push_back(Goto{static_cast<size_t>(at(t, i + 1).lit.i)});
      return true;
    }
    if (at(t, i).text == "halt") {
      if (at(t, i + 1).kind != Tok::Kind::End) return fail("trailing tokens");
      prog.instrs.push_back(Halt{});
      return true;
    }
    if (at(t, i).text == "noop") {
      if (at(t, i + 1).kind != Tok::Kind::End) return fail("trailing tokens");
      prog.instrs.push_back(Noop{});
      return true;
    }
    if (at(t, i).text == "if") {
      ++i;
      BranchCond cond;
      if (!parse_cond(t, i, cond)) return false;
      if (at(t, i).text != "goto" || at(t, i + 1).kind != Tok::Kind::Int || at(t, i + 1).lit.i < 0)
        return fail("expected 'goto <n>'");
      size_t tt = static_cast<size_t>(at(t, i + 1).lit.i);
      i += 2;
      if (at(t, i).text != "else" || at(t, i + 1).kind != Tok::Kind::Int || at(t, i + 1).lit.i < 0)
        return fail("expected 'else <m>'");
      size_t tf = static_cast<size_t>(at(t, i + 1).lit.i);
      i += 2;
      if (at(t, i).kind != Tok::Kind::End) return fail("trailing tokens");
      prog.instrs.push_back(CondGoto{std::move(cond), tt, tf});
      return true;
    }

    if (at(t, i).kind != Tok::Kind::Ident) return fail("expected destination");
    std::string dst = at(t, i).text;
    ++i;
    if (at(t, i).text == "[") {
      // A[idx] := src
      ++i;
      if (!is_operand(at(t, i))) return fail("expected index operand");
      Operand idx = operand(at(t, i));
      ++i;
      if (at(t, i).text != "]" || at(t, i + 1).text != ":=") return fail("expected '] :='");
      i += 2;
      if (!is_operand(at(t, i))) return fail("expected source operand");
      Operand src = operand(at(t, i));
      ++i;
      if (at(t, i).kind != Tok::Kind::End) return fail("trailing tokens");
      prog.instrs.push_back(ArrStore{dst, std::move(idx), std::move(src)});
      return true;
    }
    if (at(t, i).text != ":=") return fail("expected ':='");
    ++i;

    if (at(t, i).text == "-" || at(t, i).text == "not" || at(t, i).text == "int_to_float") {
      UnOp op = at(t, i).text == "-" ? UnOp::Neg : (at(t, i).text == "not" ? UnOp::Not : UnOp::IntToFloat);
      ++i;
      if (!is_operand(at(t, i))) return fail("expected operand");
      Operand a = operand(at(t, i));
      ++i;
      if (at(t, i).kind != Tok::Kind::End) return fail("trailing tokens");
      prog.instrs.push_back(UnAssign{dst, op, std::move(a)});
      return true;
    }
    if (!is_operand(at(t, i))) return fail("expected operand");
    Tok first = at(t, i);
    ++i;
    if (at(t, i).kind == Tok::Kind::End) {
      prog.instrs.push_back(Copy{dst, operand(first)});
      return true;
    }
    if (at(t, i).text == "[") {
      // dst := A[idx]
      if (first.kind != Tok::Kind::Ident) return fail("expected array name");
      ++i;
      if (!is_operand(at(t, i))) return fail("expected index operand");
      Operand idx = operand(at(t, i));
      ++i;
      if (at(t, i).text != "]") return fail("expected ']'");
      ++i;
      if (at(t, i).kind != Tok::Kind::End) return fail("trailing tokens");
      prog.instrs.push_back(ArrLoad{dst, first.text, std::move(idx)});
      return true;
    }
    auto op = binop_from(at(t, i).text);
    if (!op) return fail("expected operator, got '" + at(t, i).text + "'");
    ++i;
    if (!is_operand(at(t, i))) return fail("expected operand");
    Operand b = operand(at(t, i));
    ++i;
    if (at(t, i).kind != Tok::Kind::End) return fail("trailing tokens");
    prog.instrs.push_back(BinAssign{dst, *op, operand(first), std::move(b)});
    return true;
  }
};

}  // namespace

Result<Program> parse_tac(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line)) return Result<Program>::failure("empty file");

  // Header + integrity hash over the body bytes.
  {
    std::istringstream hs(line);
    std::string a, b, c;
    hs >> a >> b >> c;
    if (a != "tac" || b != "v1" || c.rfind("hash=", 0) != 0)
      return Result<Program>::failure("line 1: expected header 'tac v1 hash=<hex>'");
    std::string want = c.substr(5);
    size_t body_start = text.find('\n');
    std::string body = body_start == std::string::npos ? "" : text.substr(body_start + 1);
    if (want != "0" && want != to_hex(fnv1a_bytes(fnv1a_init(), body)))
      return Result<Program>::failure("line 1: content hash mismatch");
  }

  TacParser parser;
  parser.lineno = 1;
  bool in_decls = true;
  while (std::getline(is, line)) {
    ++parser.lineno;
    if (line.empty()) continue;
    auto toks = LineLexer(line).lex();
    if (!toks.ok())
      return Result<Program>::failure("line " + std::to_string(parser.lineno) + ": " + toks.err);
    const std::vector<Tok>& t = *toks;
    if (t.size() == 1) continue;  // only End
    if (t[0].kind == Tok::Kind::Ident && t[0].text == "decl") {
      if (!in_decls)
        return Result<Program>::failure("line " + std::to_string(parser.lineno) +
                                        ": decl after instructions");
      if (!parser.parse_decl(t)) return Result<Program>::failure(parser.error);
    } else {
      in_decls = false;
      if (!parser.parse_instr(t)) return Result<Program>::failure(parser.error);
    }
  }
  return Result<Program>::success(std::move(parser.prog));
}

}  // namespace tacc
