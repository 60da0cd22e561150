/*******************************************************************\

Module: Model decoding into counterexamples

\*******************************************************************/

#ifndef KBMC_VCGEN_DECODE_H
#define KBMC_VCGEN_DECODE_H

#include "vcgen/counterexample.h"
#include "vcgen/formula.h"

namespace kbmc
{

/// Reconstruct the execution from a SAT model: states in step order
/// (only steps whose guard is true under the model), the first violated
/// claim by step order, and the nondet substitutions keyed for replay.
/// Throws model_gap when the model misses a required symbol.
counterexample decode_counterexample(const ssa_trace &t, const solver_verdict &v);

} // namespace kbmc

#endif
