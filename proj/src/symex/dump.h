/*******************************************************************\

Module: Textual SSA dump

\*******************************************************************/

#ifndef KBMC_SYMEX_DUMP_H
#define KBMC_SYMEX_DUMP_H

#include <string>

#include "symex/ssa.h"

namespace kbmc
{

/// One step per line, stable across runs: guard, kind, expression.
/// Golden tests and --dump-ssa rely on this format.
std::string dump_trace(const ssa_trace &t);

} // namespace kbmc

#endif
