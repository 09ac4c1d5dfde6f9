// Front end: the `.knl` kernel source language (parse + lower to TAC) and the
// bidirectional `.tac` text format used by fixtures, tests and the
// certificate workflow.
#pragma once

#include <memory>

#include "tacc/ir.hpp"

namespace tacc {

// Source AST -----------------------------------------------------------------

struct SrcPos {
  int line = 1;
  int col = 1;
};

struct SrcExpr;
using SrcExprPtr = std::unique_ptr<SrcExpr>;

struct SrcExpr {
  enum class Kind { Lit, Var, Index, Bin, Un };
  Kind kind = Kind::Lit;
  SrcPos pos;
  Literal lit;
  std::string name;  // Var/Index
  BinOp bop = BinOp::Add;
  UnOp uop = UnOp::Neg;
  SrcExprPtr a, b;  // Bin(a,b), Un(a), Index(a = index expr)
};

struct SrcStmt;
using SrcStmtPtr = std::unique_ptr<SrcStmt>;

struct SrcStmt {
  enum class Kind { Assign, ArrAssign, If, While, For };
  Kind kind = Kind::Assign;
  SrcPos pos;
  std::string name;           // Assign/ArrAssign/For target
  SrcExprPtr index;           // ArrAssign
  SrcExprPtr value;           // Assign/ArrAssign value, If/While condition, For from
  SrcExprPtr value2;          // For to
  std::vector<SrcStmtPtr> body;
  std::vector<SrcStmtPtr> els;  // If only
};

struct SrcDecl {
  std::string name;
  TypeTag type = TypeTag::Int;
  int64_t array_len = 0;  // 0 for scalars
  bool is_input = false;
  bool is_output = false;
  SrcPos pos;
};

struct SourceAst {
  std::vector<SrcDecl> decls;
  std::vector<SrcStmtPtr> stmts;
};

// Diagnostics carry 1-based line/column and the expectation that failed.
Result<SourceAst> parse_source(const std::string& text);

// Three-address lowering: compound expressions split through `%t<n>`
// temporaries, structured control lowered to gotos, exactly one halt at the
// end. Mixed int/float arithmetic inserts int_to_float; there is no implicit
// float-to-int conversion.
Result<Program> lower(const SourceAst& ast);

Result<Program> compile_source(const std::string& text);  // parse + lower

// TAC text format --------------------------------------------------------------
//
// Header `tac v1 hash=<hex>` where <hex> is the FNV-1a hash of the body (the
// bytes after the header line); `hash=0` opts out of verification for
// hand-written files. Then `decl` lines in declaration order (`out` markers
// define the output order) and one instruction per line, numbered from 0.

std::string print_tac(const Program& p);
Result<Program> parse_tac(const std::string& text);

}  // namespace tacc
