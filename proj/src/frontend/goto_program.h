/*******************************************************************\

Module: GOTO intermediate representation

\*******************************************************************/

#ifndef KBMC_FRONTEND_GOTO_PROGRAM_H
#define KBMC_FRONTEND_GOTO_PROGRAM_H

#include <map>
#include <string>
#include <vector>

#include "properties/property.h"
#include "util/expr.h"
#include "util/types.h"

namespace kbmc
{

enum class goto_kind
{
  ASSIGN,        // lhs (lvalue expr) := rhs
  DECL,          // introduce symbol with indeterminate value
  ASSUME,        // constrain paths
  ASSERT,        // safety claim with property class
  GOTO,          // if guard then jump to target, else fall through
  FUNCTION_CALL, // callee(args), optional lhs
  MALLOC,        // lhs := fresh heap object of `alloc_type`, size_expr bytes
  FREE,          // release pointee
  HAVOC,         // symbol := nondeterministic value
  END            // single exit point
};

struct goto_instruction
{
  goto_kind kind = goto_kind::END;
  int index = 0;
  int source_line = 0;

  exprt lhs;   // ASSIGN/MALLOC/FUNCTION_CALL target (lvalue form)
  exprt rhs;   // ASSIGN value / ASSUME / ASSERT condition / FREE pointer
  exprt guard; // GOTO condition
  int target = -1;

  std::string callee;
  std::vector<exprt> args;

  property_class property = property_class::USER_ASSERT;
  std::string detail; // assertion text, array name, or object label

  std::string symbol; // DECL / HAVOC
  typet decl_type;

  typet alloc_type;         // MALLOC: element type of the new object
  bool param_object = false; // MALLOC emitted by mark_entry_nondet
};

struct goto_program
{
  std::string function;
  std::string file;
  std::vector<goto_instruction> instructions;
  std::vector<std::pair<std::string, typet>> params;
  typet return_type;
  bool check_leaks = false; // leak claims evaluated at END
  int end_line = 0;

  int end_index() const
  {
    return static_cast<int>(instructions.size()) - 1;
  }
};

/// All functions of a unit lowered together (callees are needed for
/// inlining during symbolic execution), plus the struct table.
struct goto_model
{
  std::map<std::string, goto_program> functions;
  struct_table structs;
};

/// Checks the structural invariants: all jump targets in range, exactly
/// one END (the last instruction), ASSERT instructions carry a property
/// class and boolean condition. Returns an empty string when fine.
std::string validate_goto_program(const goto_program &gp);

} // namespace kbmc

#endif
