/*******************************************************************\

Module: Lowering of the AST to GOTO form

\*******************************************************************/

#ifndef KBMC_FRONTEND_LOWERING_H
#define KBMC_FRONTEND_LOWERING_H

#include "frontend/ast.h"
#include "frontend/goto_program.h"

namespace kbmc
{

/// Type-check one function and lower it: all structured control flow
/// becomes conditional jumps, struct locals are flattened to per-field
/// variables, calls/malloc/nondet are hoisted to dedicated
/// instructions. Throws type_error or unsupported_construct.
goto_program lower_to_goto(const function_decl &fn, const parsed_unit &unit);

/// Lower every function of the unit (including included ones) into one
/// model.
goto_model lower_unit(const parsed_unit &unit);

/// Prepend nondeterministic initialization for every parameter. Scalars
/// are havocked; pointer parameters get a nondeterministic choice
/// between NULL and a fresh object of the pointee type with nondet
/// contents. Returns a new program.
goto_program mark_entry_nondet(const goto_program &gp);

} // namespace kbmc

#endif
