/*******************************************************************\

Module: Bounded unrolling of GOTO programs into SSA traces

\*******************************************************************/

#ifndef KBMC_SYMEX_UNROLL_H
#define KBMC_SYMEX_UNROLL_H

#include "symex/ssa.h"

namespace kbmc
{

/// Unroll `entry` (and, inline, everything it calls) up to bound k.
///
/// BASE_CASE: safety claims stay claims; paths that would iterate
/// beyond k are diverted (the unwinding cut), unless
/// opts.unwinding_claims is set, in which case each exhausted loop
/// additionally claims that its guard is false (classic BMC with
/// unwinding assertions).
///
/// FORWARD_CONDITION: safety claims are dropped; the only claims are
/// the unwinding assertions, one per loop head (and one per blocked
/// recursive call), so the formula encodes the negated completeness
/// threshold.
///
/// INDUCTIVE_STEP: loops run k+1 copies from a havocked entry state;
/// every safety claim is assumed at the havoc point (rebound to current
/// versions) and inside copies 1..k, and claimed in copy k+1 and
/// outside loops.
///
/// The model must already be instrumented. Throws unwind_overflow when
/// the plan exceeds opts.step_budget.
ssa_trace unroll(
  const goto_model &model,
  const std::string &entry,
  int k,
  symex_mode mode,
  const unroll_options &opts = {});

} // namespace kbmc

#endif
