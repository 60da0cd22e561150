/*******************************************************************\

Module: Bounded enumeration backend

\*******************************************************************/

#ifndef KBMC_VCGEN_ENUMERATOR_H
#define KBMC_VCGEN_ENUMERATOR_H

#include "symex/ssa.h"
#include "vcgen/formula.h"

namespace kbmc
{

struct enum_options
{
  std::int64_t node_budget = 50'000'000;
  int max_free_bits = 26; // widest free scalar the search will branch on
  const deadline *timeout = nullptr;
};

/// Decide the formula by depth-first search over the free symbols,
/// evaluating the defining equations forward and pruning at failed
/// constraints. Free symbols are only branched on at their first read,
/// so unread inputs cost nothing. Deterministic: domains are explored
/// in a fixed order, so the first model found is stable across runs.
solver_verdict solve_with_enumerator(const formula &f, const enum_options &opts = {});

/// Evaluate an expression under a total model (missing symbols default
/// to zero). Used when decoding counterexamples.
std::uint64_t eval_under_model(const exprt &e, const modelt &model);

} // namespace kbmc

#endif
