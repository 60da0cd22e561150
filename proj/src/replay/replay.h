/*******************************************************************\

Module: Counterexample replay

\*******************************************************************/

#ifndef KBMC_REPLAY_REPLAY_H
#define KBMC_REPLAY_REPLAY_H

#include "replay/interpreter.h"
#include "vcgen/counterexample.h"

namespace kbmc
{

enum class replay_outcome
{
  REPRODUCED, // same property class fired at the same line
  DIVERGED,
  CLEAN // ran to completion without any violation
};

struct replay_result
{
  replay_outcome outcome = replay_outcome::DIVERGED;
  property_class property = property_class::USER_ASSERT;
  int line = 0;
  std::string reason;       // DIVERGED explanation
  bool crash_equivalent = false; // a native run would abort here
};

/// Execute the prepared program concretely, substituting the
/// counterexample's value at each nondeterministic event. Throws
/// missing_assignment when the counterexample does not cover an input
/// the path needs.
replay_result replay(
  const goto_model &prepared,
  const std::string &entry,
  const counterexample &cex);

/// Whether a violation of this class would abort a native process.
bool is_crash_equivalent(property_class pc);

enum class exhaustive_kind
{
  NO_VIOLATION,
  VIOLATION
};

struct exhaustive_result
{
  exhaustive_kind kind = exhaustive_kind::NO_VIOLATION;
  property_class property = property_class::USER_ASSERT;
  int line = 0;
  int depth = 0; // minimal loop-iteration/recursion depth over all paths
};

/// Brute-force oracle: enumerate every nondeterministic input vector
/// (lazily, in execution order) and interpret each path. Throws
/// budget_exceeded when the combined input width passes input_bound
/// bits or a path exceeds depth_bound steps.
exhaustive_result exhaustive_check(
  const goto_model &prepared,
  const std::string &entry,
  int input_bound_bits = 24,
  std::int64_t depth_bound = 2'000'000);

} // namespace kbmc

#endif
