/*******************************************************************\

Module: Abstract syntax tree for the mini-C subset

\*******************************************************************/

#ifndef KBMC_FRONTEND_AST_H
#define KBMC_FRONTEND_AST_H

#include <memory>
#include <string>
#include <vector>

#include "util/expr.h"
#include "util/types.h"

namespace kbmc
{

// Source expressions reuse exprt plus a handful of frontend-only node
// shapes carried in ast_expr: calls, malloc, nondet and sizeof cannot
// appear in the core expression language, so statements hold them
// explicitly and the lowering hoists them.

enum class ast_expr_kind
{
  CORE,      // plain exprt (symbols, ops, literals, index, deref, member)
  CALL,      // name(args)
  MALLOC,    // malloc(size)
  NONDET,    // nondet_<type>()
  SIZEOF     // sizeof(type), folded to a constant by the type checker
};

struct ast_expr;
using ast_exprt = std::shared_ptr<ast_expr>;

struct ast_expr
{
  ast_expr_kind kind = ast_expr_kind::CORE;
  int line = 0;

  // CORE payload mirrors expr_node but with child ast_exprs
  expr_kind core = expr_kind::CONSTANT;
  typet type;
  std::uint64_t bits = 0;
  std::string symbol; // variable, callee, or struct field name
  unary_op uop = unary_op::NEG;
  binary_op bop = binary_op::ADD;
  std::string field; // member access a.f / p->f
  bool arrow = false;
  std::vector<ast_exprt> args;

  std::string text; // source text slice, kept for assertion rendering
};

enum class stmt_kind
{
  DECL,       // type name [= init]
  ASSIGN,     // lvalue = expr
  IF,         // if (cond) then_block [else else_block]
  WHILE,      // while (cond) body
  FOR,        // for (init; cond; step) body
  RETURN,     // return [expr]
  ASSERT_,    // assert(expr)
  ASSUME,     // assume(expr)
  EXPR,       // expression statement (call)
  FREE,       // free(expr)
  BLOCK
};

struct statement;
using stmtt = std::shared_ptr<statement>;

struct statement
{
  stmt_kind kind = stmt_kind::BLOCK;
  int line = 0;

  typet decl_type;
  std::string name;      // DECL target
  ast_exprt lhs;         // ASSIGN target (lvalue)
  ast_exprt value;       // init / rhs / condition / returned expr
  std::vector<stmtt> body;
  std::vector<stmtt> else_body;
  stmtt init, step;      // FOR clauses
  std::string text;      // source text of the controlling expression
};

struct parameter
{
  std::string name;
  typet type;
};

struct function_decl
{
  std::string name;
  std::vector<parameter> params;
  typet return_type;
  std::vector<stmtt> body;
  int decl_line = 0;
  std::string file; // path of the file that declared it
};

/// Parsed contents of one source unit plus everything pulled in via
/// #include directives.
struct parsed_unit
{
  std::vector<function_decl> unit_functions;    // declared in the unit itself
  std::vector<function_decl> include_functions; // from resolved includes
  struct_table structs;
  std::vector<std::string> warnings;

  const function_decl *find_function(const std::string &name) const
  {
    for(const auto &f : unit_functions)
      if(f.name == name)
        return &f;
    for(const auto &f : include_functions)
      if(f.name == name)
        return &f;
    return nullptr;
  }
};

} // namespace kbmc

#endif
