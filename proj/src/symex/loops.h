/*******************************************************************\

Module: Natural loop detection on GOTO programs

\*******************************************************************/

#ifndef KBMC_SYMEX_LOOPS_H
#define KBMC_SYMEX_LOOPS_H

#include <set>
#include <string>
#include <vector>

#include "frontend/goto_program.h"

namespace kbmc
{

/// One natural loop. Lowering produces single-back-edge loops whose
/// body is the contiguous range [head, back]; the conditional exit jump
/// sits inside the range and targets beyond `back`.
struct loop_info
{
  int head = -1;       // back-edge target, first instruction of the test
  int back = -1;       // index of the back-edge GOTO
  int exit_goto = -1;  // first GOTO in range with target > back, -1 if none
};

/// Back-edge analysis. Throws type_error if loops are not properly
/// nested contiguous ranges (cannot happen for lowered programs).
std::vector<loop_info> find_loops(const goto_program &gp);

/// Variables assigned (or havocked, or allocated into) on some path
/// inside the given loop body, as base names. Array and struct-field
/// variables count as modified wholesale.
std::set<std::string> loop_modified_vars_of(const goto_program &gp, const loop_info &loop);

/// Union across all loops.
std::set<std::string> loop_modified_vars(const goto_program &gp);

} // namespace kbmc

#endif
