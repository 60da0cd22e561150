/*******************************************************************\

Module: Constant propagation on SSA traces

\*******************************************************************/

#ifndef KBMC_SYMEX_PROPAGATE_H
#define KBMC_SYMEX_PROPAGATE_H

#include "symex/ssa.h"

namespace kbmc
{

/// Fold every expression whose value is implied by constant
/// assignments. Verdict-equivalent by construction: the folder uses the
/// same arithmetic as the backends.
ssa_trace constant_propagate(const ssa_trace &t);

/// Expression-level folder, exposed for reuse.
exprt fold_expr(const exprt &e, const std::map<std::string, exprt> &consts);

} // namespace kbmc

#endif
