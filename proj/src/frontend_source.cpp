// Lexer, recursive-descent parser and TAC lowering for the .knl kernel
// language.
#include <cassert>
#include <cctype>
#include <sstream>

#include "tacc/frontend.hpp"

namespace tacc {

namespace {

struct Token {
  enum class Kind { Ident, Keyword, Int, Float, Punct, End, Error };
  Kind kind = Kind::End;
  std::string text;
  Literal lit;
  int line = 1;
  int col = 1;
};

const char* kKeywords[] = {"var", "int",  "float", "bool", "in",   "out", "begin", "end",
                           "if",  "then", "else",  "while", "do",  "for", "to",    "and",
                           "or",  "not",  "true",  "false"};

bool is_keyword(const std::string& s) {
  for (const char* k : kKeywords) {
    if (s == k) return true;
  }
  return false;
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : s_(text) {}

  std::vector<Token> lex() {
    std::vector<Token> out;
    while (true) {
      skip_ws_and_comments();
      if (pos_ >= s_.size()) break;
      int line = line_, col = col_;
      char c = s_[pos_];
      Token t;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t = ident();
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        t = number();
      } else {
        t = punct();
      }
      t.line = line;
      t.col = col;
      out.push_back(t);
      if (t.kind == Token::Kind::Error) break;
    }
    out.push_back(Token{Token::Kind::End, "<end>", {}, line_, col_});
    return out;
  }

 private:
  const std::string& s_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_ws_and_comments() {
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token ident() {
    std::string text;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      text += s_[pos_];
      advance();
    }
    Token t;
    if (text == "true" || text == "false") {
      t.kind = Token::Kind::Keyword;
      t.lit = Literal::of_bool(text == "true");
    } else {
      t.kind = is_keyword(text) ? Token::Kind::Keyword : Token::Kind::Ident;
    }
    t.text = text;
    return t;
  }

  Token number() {
    std::string text;
    bool is_float = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        text += c;
        advance();
      } else if (c == '.' && pos_ + 1 < s_.size() &&
                 std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
        is_float = true;
        text += c;
        advance();
      } else if (c == 'e' || c == 'E') {
        is_float = true;
        text += c;
        advance();
        if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) {
          text += s_[pos_];
          advance();
        }
      } else {
        break;
      }
    }
    Token t;
    if (is_float) {
      auto v = double_from_text(text);
      if (!v) return Token{Token::Kind::Error, "bad float literal " + text, {}};
      t.kind = Token::Kind::Float;
      t.lit = Literal::of_float(*v);
    } else {
      auto v = int_from_text(text);
      if (!v) return Token{Token::Kind::Error, "bad int literal " + text, {}};
      t.kind = Token::Kind::Int;
      t.lit = Literal::of_int(*v);
    }
    t.text = text;
    return t;
  }

  Token punct() {
    static const char* two[] = {":=", "<=", ">=", "==", "!="};
    for (const char* p : two) {
      if (s_.substr(pos_, 2) == p) {
        advance();
        advance();
        return Token{Token::Kind::Punct, p, {}};
      }
    }
    char c = s_[pos_];
    if (std::string("+-*/%<>()[];").find(c) != std::string::npos) {
      advance();
      return Token{Token::Kind::Punct, std::string(1, c), {}};
    }
    return Token{Token::Kind::Error, std::string("unexpected character '") + c + "'", {}};
  }
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Result<SourceAst> parse() {
    SourceAst ast;
    while (peek().kind == Token::Kind::Keyword && peek().text == "var") {
      if (!decl(ast)) return Result<SourceAst>::failure(error_);
    }
    if (!expect_kw("begin")) return Result<SourceAst>::failure(error_);
    while (!(peek().kind == Token::Kind::Keyword && peek().text == "end")) {
      if (peek().kind == Token::Kind::End) {
        fail("unexpected end of file, expected statement or 'end'");
        return Result<SourceAst>::failure(error_);
      }
      auto s = stmt();
      if (!s) return Result<SourceAst>::failure(error_);
      ast.stmts.push_back(std::move(s));
    }
    next();  // end
    if (peek().kind != Token::Kind::End) {
      fail("trailing tokens after final 'end'");
      return Result<SourceAst>::failure(error_);
    }
    return Result<SourceAst>::success(std::move(ast));
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string error_;

  const Token& peek(size_t k = 0) const {
    size_t i = pos_ + k;
    return i < toks_.size() ? toks_[i] : toks_.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  bool fail(const std::string& msg) {
    const Token& t = peek();
    std::ostringstream os;
    os << "line " << t.line << ", col " << t.col << ": " << msg;
    if (t.kind == Token::Kind::Error) os << " (" << t.text << ")";
    else os << ", got '" << t.text << "'";
    error_ = os.str();
    return false;
  }

  bool expect_kw(const std::string& kw) {
    if (peek().kind == Token::Kind::Keyword && peek().text == kw) {
      next();
      return true;
    }
    return fail("expected '" + kw + "'");
  }

  bool expect_punct(const std::string& p) {
    if (peek().kind == Token::Kind::Punct && peek().text == p) {
      next();
      return true;
    }
    return fail("expected '" + p + "'");
  }

  bool decl(SourceAst& ast) {
    SrcDecl d;
    d.pos = {peek().line, peek().col};
    next();  // var
    const Token& ty = peek();
    if (ty.text == "int") d.type = TypeTag::Int;
    else if (ty.text == "float") d.type = TypeTag::Float;
    else if (ty.text == "bool") d.type = TypeTag::Bool;
    else return fail("expected type");
    next();
    if (peek().kind != Token::Kind::Ident) return fail("expected variable name");
    d.name = next().text;
    if (peek().text == "[") {
      next();
      if (peek().kind != Token::Kind::Int) return fail("expected array length");
      d.array_len = next().lit.i;
      d.type = array_of(d.type);
      if (!expect_punct("]")) return false;
    }
    while (peek().kind == Token::Kind::Keyword && (peek().text == "in" || peek().text == "out")) {
      if (next().text == "in") d.is_input = true;
      else d.is_output = true;
    }
    if (!expect_punct(";")) return false;
    ast.decls.push_back(std::move(d));
    return true;
  }

  SrcStmtPtr stmt() {
    const Token& t = peek();
    if (t.kind == Token::Kind::Keyword) {
      if (t.text == "if") return if_stmt();
      if (t.text == "while") return while_stmt();
      if (t.text == "for") return for_stmt();
      fail("expected statement");
      return nullptr;
    }
    if (t.kind != Token::Kind::Ident) {
      fail("expected statement");
      return nullptr;
    }
    auto s = std::make_unique<SrcStmt>();
    s->pos = {t.line, t.col};
    s->name = next().text;
    if (peek().text == "[") {
      next();
      s->kind = SrcStmt::Kind::ArrAssign;
      s->index = expr();
      if (!s->index) return nullptr;
      if (!expect_punct("]")) return nullptr;
    } else {
      s->kind = SrcStmt::Kind::Assign;
    }
    if (!expect_punct(":=")) return nullptr;
    s->value = expr();
    if (!s->value) return nullptr;
    if (!expect_punct(";")) return nullptr;
    return s;
  }

  bool stmt_list(std::vector<SrcStmtPtr>& out, std::initializer_list<const char*> stops) {
    while (true) {
      const Token& t = peek();
      if (t.kind == Token::Kind::Keyword) {
        for (const char* stop : stops) {
          if (t.text == stop) return true;
        }
      }
      if (t.kind == Token::Kind::End) return fail("unexpected end of file inside block");
      auto s = stmt();
      if (!s) return false;
      out.push_back(std::move(s));
    }
  }

  SrcStmtPtr if_stmt() {
    auto s = std::make_unique<SrcStmt>();
    s->kind = SrcStmt::Kind::If;
    s->pos = {peek().line, peek().col};
    next();  // if
    s->value = expr();
    if (!s->value) return nullptr;
    if (!expect_kw("then")) return nullptr;
    if (!stmt_list(s->body, {"else", "end"})) return nullptr;
    if (peek().text == "else") {
      next();
      if (!stmt_list(s->els, {"end"})) return nullptr;
    }
    if (!expect_kw("end")) return nullptr;
    return s;
  }

  SrcStmtPtr while_stmt() {
    auto s = std::make_unique<SrcStmt>();
    s->kind = SrcStmt::Kind::While;
    s->pos = {peek().line, peek().col};
    next();  // while
    s->value = expr();
    if (!s->value) return nullptr;
    if (!expect_kw("do")) return nullptr;
    if (!stmt_list(s->body, {"end"})) return nullptr;
    if (!expect_kw("end")) return nullptr;
    return s;
  }

  SrcStmtPtr for_stmt() {
    auto s = std::make_unique<SrcStmt>();
    s->kind = SrcStmt::Kind::For;
    s->pos = {peek().line, peek().col};
    next();  // for
    if (peek().kind != Token::Kind::Ident) {
      fail("expected loop variable");
      return nullptr;
    }
    s->name = next().text;
    if (!expect_punct(":=")) return nullptr;
    s->value = expr();
    if (!s->value) return nullptr;
    if (!expect_kw("to")) return nullptr;
    s->value2 = expr();
    if (!s->value2) return nullptr;
    if (!expect_kw("do")) return nullptr;
    if (!stmt_list(s->body, {"end"})) return nullptr;
    if (!expect_kw("end")) return nullptr;
    return s;
  }

  // Expression grammar, loosest first: or, and, not, comparison, +-, */%,
  // unary minus, primary.
  SrcExprPtr expr() { return or_expr(); }

  SrcExprPtr bin_node(BinOp op, SrcExprPtr a, SrcExprPtr b, SrcPos pos) {
    auto e = std::make_unique<SrcExpr>();
    e->kind = SrcExpr::Kind::Bin;
    e->bop = op;
    e->a = std::move(a);
    e->b = std::move(b);
    e->pos = pos;
    return e;
  }

  SrcExprPtr or_expr() {
    auto a = and_expr();
    if (!a) return nullptr;
    while (peek().text == "or" && peek().kind == Token::Kind::Keyword) {
      SrcPos pos{peek().line, peek().col};
      next();
      auto b = and_expr();
      if (!b) return nullptr;
      a = bin_node(BinOp::Or, std::move(a), std::move(b), pos);
    }
    return a;
  }

  SrcExprPtr and_expr() {
    auto a = not_expr();
    if (!a) return nullptr;
    while (peek().text == "and" && peek().kind == Token::Kind::Keyword) {
      SrcPos pos{peek().line, peek().col};
      next();
      auto b = not_expr();
      if (!b) return nullptr;
      a = bin_node(BinOp::And, std::move(a), std::move(b), pos);
    }
    return a;
  }

  SrcExprPtr not_expr() {
    if (peek().kind == Token::Kind::Keyword && peek().text == "not") {
      SrcPos pos{peek().line, peek().col};
      next();
      auto a = not_expr();
      if (!a) return nullptr;
      auto e = std::make_unique<SrcExpr>();
      e->kind = SrcExpr::Kind::Un;
      e->uop = UnOp::Not;
      e->a = std::move(a);
      e->pos = pos;
      return e;
    }
    return cmp_expr();
  }

  SrcExprPtr cmp_expr() {
    auto a = add_expr();
    if (!a) return nullptr;
    const std::string& op = peek().text;
    BinOp bop;
    if (op == "<") bop = BinOp::Lt;
    else if (op == "<=") bop = BinOp::Le;
    else if (op == ">") bop = BinOp::Gt;
    else if (op == ">=") bop = BinOp::Ge;
    else if (op == "==") bop = BinOp::Eq;
    else if (op == "!=") bop = BinOp::Ne;
    else return a;
    SrcPos pos{peek().line, peek().col};
    next();
    auto b = add_expr();
    if (!b) return nullptr;
    return bin_node(bop, std::move(a), std::move(b), pos);
  }

  SrcExprPtr add_expr() {
    auto a = mul_expr();
    if (!a) return nullptr;
    while (peek().text == "+" || peek().text == "-") {
      BinOp op = peek().text == "+" ? BinOp::Add : BinOp::Sub;
      SrcPos pos{peek().line, peek().col};
      next();
      auto b = mul_expr();
      if (!b) return nullptr;
      a = bin_node(op, std::move(a), std::move(b), pos);
    }
    return a;
  }

  SrcExprPtr mul_expr() {
    auto a = unary();
    if (!a) return nullptr;
    while (peek().text == "*" || peek().text == "/" || peek().text == "%") {
      BinOp op = peek().text == "*" ? BinOp::Mul : (peek().text == "/" ? BinOp::Div : BinOp::Mod);
      SrcPos pos{peek().line, peek().col};
      next();
      auto b = unary();
      if (!b) return nullptr;
      a = bin_node(op, std::move(a), std::move(b), pos);
    }
    return a;
  }

  SrcExprPtr unary() {
    if (peek().text == "-" && peek().kind == Token::Kind::Punct) {
      SrcPos pos{peek().line, peek().col};
      next();
      auto a = unary();
      if (!a) return nullptr;
      if (a->kind == SrcExpr::Kind::Lit) {
        // Fold the sign into the literal.
        if (a->lit.tag == TypeTag::Int) a->lit.i = -a->lit.i;
        else if (a->lit.tag == TypeTag::Float) a->lit.f = -a->lit.f;
        return a;
      }
      auto e = std::make_unique<SrcExpr>();
      e->kind = SrcExpr::Kind::Un;
      e->uop = UnOp::Neg;
      e->a = std::move(a);
      e->pos = pos;
      return e;
    }
    return primary();
  }

  SrcExprPtr primary() {
    const Token& t = peek();
    SrcPos pos{t.line, t.col};
    if (t.kind == Token::Kind::Int || t.kind == Token::Kind::Float ||
        (t.kind == Token::Kind::Keyword && (t.text == "true" || t.text == "false"))) {
      auto e = std::make_unique<SrcExpr>();
      e->kind = SrcExpr::Kind::Lit;
      e->lit = next().lit;
      e->pos = pos;
      return e;
    }
    if (t.text == "(") {
      next();
      auto e = expr();
      if (!e) return nullptr;
      if (!expect_punct(")")) return nullptr;
      return e;
    }
    if (t.kind == Token::Kind::Ident) {
      auto e = std::make_unique<SrcExpr>();
      e->name = next().text;
      e->pos = pos;
      if (peek().text == "[") {
        next();
        e->kind = SrcExpr::Kind::Index;
        e->a = expr();
        if (!e->a) return nullptr;
        if (!expect_punct("]")) return nullptr;
      } else {
        e->kind = SrcExpr::Kind::Var;
      }
      return e;
    }
    fail("expected expression");
    return nullptr;
  }
};

// Lowering --------------------------------------------------------------------

struct Lowerer {
  Program prog;
  std::string error;
  int next_temp = 0;

  bool fail(SrcPos pos, const std::string& msg) {
    std::ostringstream os;
    os << "line " << pos.line << ", col " << pos.col << ": " << msg;
    error = os.str();
    return false;
  }

  std::string fresh_temp(TypeTag t) {
    std::string name = "%t" + std::to_string(next_temp++);
    prog.add_var(VarInfo{name, t, 0, false});
    return name;
  }

  size_t emit(Instruction ins) {
    prog.instrs.push_back(std::move(ins));
    return prog.n() - 1;
  }

  std::optional<TypeTag> operand_tag(const Operand& o) {
    if (auto* name = var_of(o)) {
      const VarInfo* vi = prog.find_var(*name);
      if (!vi) return std::nullopt;
      return vi->type;
    }
    return std::get<Literal>(o).tag;
  }

  // Emits an int_to_float conversion unless the operand already is a float.
  Operand to_float(const Operand& o) {
    auto t = operand_tag(o);
    if (t && *t == TypeTag::Float) return o;
    if (auto* lit = std::get_if<Literal>(&o); lit && lit->tag == TypeTag::Int)
      return lit_operand(Literal::of_float(static_cast<double>(lit->i)));
    std::string tmp = fresh_temp(TypeTag::Float);
    emit(UnAssign{tmp, UnOp::IntToFloat, o});
    return var_operand(tmp);
  }

  // Lowers an expression; returns its operand, or nullopt on a semantic
  // error. `want` requests an int->float promotion of the result.
  std::optional<Operand> lower_expr(const SrcExpr& e) {
    switch (e.kind) {
      case SrcExpr::Kind::Lit:
        return lit_operand(e.lit);
      case SrcExpr::Kind::Var: {
        const VarInfo* vi = prog.find_var(e.name);
        if (!vi) {
          fail(e.pos, "undeclared variable " + e.name);
          return std::nullopt;
        }
        if (!is_scalar(vi->type)) {
          fail(e.pos, e.name + " is an array; index it");
          return std::nullopt;
        }
        return var_operand(e.name);
      }
      case SrcExpr::Kind::Index: {
        const VarInfo* vi = prog.find_var(e.name);
        if (!vi) {
          fail(e.pos, "undeclared variable " + e.name);
          return std::nullopt;
        }
        if (!is_array(vi->type)) {
          fail(e.pos, e.name + " is not an array");
          return std::nullopt;
        }
        auto idx = lower_expr(*e.a);
        if (!idx) return std::nullopt;
        if (operand_tag(*idx) != TypeTag::Int) {
          fail(e.a->pos, "array index must be int");
          return std::nullopt;
        }
        std::string tmp = fresh_temp(elem_type(vi->type));
        emit(ArrLoad{tmp, e.name, *idx});
        return var_operand(tmp);
      }
      case SrcExpr::Kind::Un: {
        auto a = lower_expr(*e.a);
        if (!a) return std::nullopt;
        auto ta = operand_tag(*a);
        if (e.uop == UnOp::Not && ta != TypeTag::Bool) {
          fail(e.pos, "'not' needs a bool operand");
          return std::nullopt;
        }
        if (e.uop == UnOp::Neg && ta != TypeTag::Int && ta != TypeTag::Float) {
          fail(e.pos, "'-' needs an int or float operand");
          return std::nullopt;
        }
        std::string tmp = fresh_temp(*ta);
        emit(UnAssign{tmp, e.uop, *a});
        return var_operand(tmp);
      }
      case SrcExpr::Kind::Bin:
        return lower_bin(e);
    }
    return std::nullopt;
  }

  std::optional<Operand> lower_bin(const SrcExpr& e) {
    auto a = lower_expr(*e.a);
    if (!a) return std::nullopt;
    auto b = lower_expr(*e.b);
    if (!b) return std::nullopt;
    auto ta = operand_tag(*a), tb = operand_tag(*b);
    switch (e.bop) {
      case BinOp::And:
      case BinOp::Or: {
        if (ta != TypeTag::Bool || tb != TypeTag::Bool) {
          fail(e.pos, "'and'/'or' need bool operands");
          return std::nullopt;
        }
        std::string tmp = fresh_temp(TypeTag::Bool);
        emit(BinAssign{tmp, e.bop, *a, *b});
        return var_operand(tmp);
      }
      case BinOp::Eq:
      case BinOp::Ne:
        if (ta == TypeTag::Bool && tb == TypeTag::Bool) break;
        [[fallthrough]];
      case BinOp::Lt:
      case BinOp::Le:
      case BinOp::Gt:
      case BinOp::Ge:
      case BinOp::Add:
      case BinOp::Sub:
      case BinOp::Mul:
      case BinOp::Div:
      case BinOp::Mod: {
        bool numeric_a = ta == TypeTag::Int || ta == TypeTag::Float;
        bool numeric_b = tb == TypeTag::Int || tb == TypeTag::Float;
        if (!numeric_a || !numeric_b) {
          fail(e.pos, "operands of '" + binop_text(e.bop) + "' must be numeric");
          return std::nullopt;
        }
        if (ta != tb) {  // promote the int side
          a = to_float(*a);
          b = to_float(*b);
          ta = tb = TypeTag::Float;
        }
        break;
      }
    }
    TypeTag out = is_comparison(e.bop) ? TypeTag::Bool : *ta;
    std::string tmp = fresh_temp(out);
    emit(BinAssign{tmp, e.bop, *a, *b});
    return var_operand(tmp);
  }

  // Conditions keep a top-level comparison inline in the branch instruction.
  std::optional<BranchCond> lower_cond(const SrcExpr& e) {
    if (e.kind == SrcExpr::Kind::Bin && is_comparison(e.bop)) {
      auto a = lower_expr(*e.a);
      if (!a) return std::nullopt;
      auto b = lower_expr(*e.b);
      if (!b) return std::nullopt;
      auto ta = operand_tag(*a), tb = operand_tag(*b);
      bool bool_eq = (e.bop == BinOp::Eq || e.bop == BinOp::Ne) && ta == TypeTag::Bool &&
                     tb == TypeTag::Bool;
      if (!bool_eq) {
        bool numeric_a = ta == TypeTag::Int || ta == TypeTag::Float;
        bool numeric_b = tb == TypeTag::Int || tb == TypeTag::Float;
        if (!numeric_a || !numeric_b) {
          fail(e.pos, "comparison operands must be numeric");
          return std::nullopt;
        }
        if (ta != tb) {
          a = to_float(*a);
          b = to_float(*b);
        }
      }
      return BranchCond::compare(e.bop, *a, *b);
    }
    auto c = lower_expr(e);
    if (!c) return std::nullopt;
    if (operand_tag(*c) != TypeTag::Bool) {
      fail(e.pos, "condition must be bool");
      return std::nullopt;
    }
    return BranchCond::bare(*c);
  }

  // Assignment into a known destination, avoiding a temp for the top node.
  bool lower_assign(const SrcStmt& s) {
    const VarInfo* vi = prog.find_var(s.name);
    if (!vi) return fail(s.pos, "undeclared variable " + s.name);
    if (!is_scalar(vi->type)) return fail(s.pos, s.name + " is an array; index it");
    auto v = lower_expr(*s.value);
    if (!v) return false;
    auto tv = operand_tag(*v);
    if (vi->type == TypeTag::Float && tv == TypeTag::Int) v = to_float(*v);
    else if (vi->type != tv) return fail(s.pos, "cannot assign " + type_name(*tv) + " to " + type_name(vi->type));
    emit(Copy{s.name, *v});
    return true;
  }

  bool lower_stmts(const std::vector<SrcStmtPtr>& stmts) {
    for (const auto& s : stmts) {
      if (!lower_stmt(*s)) return false;
    }
    return true;
  }

  bool lower_stmt(const SrcStmt& s) {
    switch (s.kind) {
      case SrcStmt::Kind::Assign:
        return lower_assign(s);
      case SrcStmt::Kind::ArrAssign: {
        const VarInfo* vi = prog.find_var(s.name);
        if (!vi) return fail(s.pos, "undeclared variable " + s.name);
        if (!is_array(vi->type)) return fail(s.pos, s.name + " is not an array");
        auto idx = lower_expr(*s.index);
        if (!idx) return false;
        if (operand_tag(*idx) != TypeTag::Int) return fail(s.index->pos, "array index must be int");
        auto v = lower_expr(*s.value);
        if (!v) return false;
        auto tv = operand_tag(*v);
        TypeTag elem = elem_type(vi->type);
        if (elem == TypeTag::Float && tv == TypeTag::Int) v = to_float(*v);
        else if (tv != elem) return fail(s.pos, "cannot store " + type_name(*tv) + " into " + type_name(vi->type));
        emit(ArrStore{s.name, *idx, *v});
        return true;
      }
      case SrcStmt::Kind::If: {
        auto cond = lower_cond(*s.value);
        if (!cond) return false;
        size_t branch = emit(CondGoto{*cond, 0, 0});
        if (!lower_stmts(s.body)) return false;
        if (s.els.empty()) {
          size_t exit = prog.n();
          auto& cg = std::get<CondGoto>(prog.instrs[branch]);
          cg.t_true = branch + 1;
          cg.t_false = exit;
        } else {
          size_t jump_over = emit(Goto{0});
          size_t else_start = prog.n();
          if (!lower_stmts(s.els)) return false;
          size_t exit = prog.n();
          auto& cg = std::get<CondGoto>(prog.instrs[branch]);
          cg.t_true = branch + 1;
          cg.t_false = else_start;
          std::get<Goto>(prog.instrs[jump_over]).target = exit;
        }
        return true;
      }
      case SrcStmt::Kind::While: {
        size_t header = prog.n();
        auto cond = lower_cond(*s.value);
        if (!cond) return false;
        size_t branch = emit(CondGoto{*cond, 0, 0});
        if (!lower_stmts(s.body)) return false;
        emit(Goto{header});
        size_t exit = prog.n();
        auto& cg = std::get<CondGoto>(prog.instrs[branch]);
        cg.t_true = branch + 1;
        cg.t_false = exit;
        return true;
      }
      case SrcStmt::Kind::For: {
        // for i := a to b  ==>  i := a; %lim := b; while i <= %lim { body; i := i + 1 }
        const VarInfo* vi = prog.find_var(s.name);
        if (!vi) return fail(s.pos, "undeclared variable " + s.name);
        if (vi->type != TypeTag::Int) return fail(s.pos, "loop variable must be int");
        auto from = lower_expr(*s.value);
        if (!from) return false;
        if (operand_tag(*from) != TypeTag::Int) return fail(s.value->pos, "loop bounds must be int");
        emit(Copy{s.name, *from});
        auto to = lower_expr(*s.value2);
        if (!to) return false;
        if (operand_tag(*to) != TypeTag::Int) return fail(s.value2->pos, "loop bounds must be int");
        Operand limit = *to;
        if (is_var(limit)) {
          // Snapshot the bound so body writes to it cannot change trip count.
          std::string lim = fresh_temp(TypeTag::Int);
          emit(Copy{lim, limit});
          limit = var_operand(lim);
        }
        size_t header = prog.n();
        size_t branch = emit(CondGoto{BranchCond::compare(BinOp::Le, var_operand(s.name), limit), 0, 0});
        if (!lower_stmts(s.body)) return false;
        emit(BinAssign{s.name, BinOp::Add, var_operand(s.name), lit_operand(Literal::of_int(1))});
        emit(Goto{header});
        size_t exit = prog.n();
        auto& cg = std::get<CondGoto>(prog.instrs[branch]);
        cg.t_true = branch + 1;
        cg.t_false = exit;
        return true;
      }
    }
    return false;
  }
};

}  // namespace

Result<SourceAst> parse_source(const std::string& text) {
  Lexer lexer(text);
  return Parser(lexer.lex()).parse();
}

Result<Program> lower(const SourceAst& ast) {
  Lowerer lw;
  for (const SrcDecl& d : ast.decls) {
    if (lw.prog.find_var(d.name)) {
      lw.fail(d.pos, "duplicate declaration of " + d.name);
      return Result<Program>::failure(lw.error);
    }
    if (is_array(d.type) && d.array_len <= 0) {
      lw.fail(d.pos, "array length must be positive");
      return Result<Program>::failure(lw.error);
    }
    lw.prog.add_var(VarInfo{d.name, d.type, d.array_len, d.is_input});
    if (d.is_output) lw.prog.outputs.push_back(d.name);
  }
  if (!lw.lower_stmts(ast.stmts)) return Result<Program>::failure(lw.error);
  lw.emit(Halt{});
  return Result<Program>::success(std::move(lw.prog));
}

Result<Program> compile_source(const std::string& text) {
  auto ast = parse_source(text);
  if (!ast.ok()) return Result<Program>::failure(ast.err);
  return lower(*ast);
}

}  // namespace tacc
