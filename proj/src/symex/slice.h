/*******************************************************************\

Module: SSA trace slicing

\*******************************************************************/

#ifndef KBMC_SYMEX_SLICE_H
#define KBMC_SYMEX_SLICE_H

#include "symex/ssa.h"

namespace kbmc
{

/// Two strategies, applied in order: (1) drop every step after the last
/// claim; (2) keep only steps in the backward dependency cone of the
/// remaining claims and assumptions. The satisfiable-claim set is
/// unchanged.
ssa_trace slice(const ssa_trace &t);

} // namespace kbmc

#endif
