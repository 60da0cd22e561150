/*******************************************************************\

Module: Concrete interpreter for GOTO programs

\*******************************************************************/

#ifndef KBMC_REPLAY_INTERPRETER_H
#define KBMC_REPLAY_INTERPRETER_H

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frontend/goto_program.h"
#include "symex/loops.h"

namespace kbmc
{

/// Scalar runtime value: a bit pattern plus its type. Pointers pack
/// (object key, offset) into the 64 bits.
struct concrete_value
{
  std::uint64_t bits = 0;
  typet type;
};

/// Nondeterministic inputs are requested lazily, at the first read of
/// an indeterminate location. Keys are stable between symbolic and
/// concrete execution: they encode the inline chain, the loop iteration
/// counters and the defining instruction (see symex/nondet_key.h).
struct nondet_source
{
  virtual ~nondet_source() = default;
  /// Returns a value, or nullopt to signal "unassigned" (the exhaustive
  /// driver uses that to fork; replay treats it as an error).
  virtual std::optional<std::uint64_t> get(const std::string &key, const typet &type) = 0;
};

/// Zero every nondet input; handy for deterministic smoke runs.
struct zero_nondet_source final : nondet_source
{
  std::optional<std::uint64_t> get(const std::string &, const typet &) override
  {
    return 0;
  }
};

struct map_nondet_source final : nondet_source
{
  std::map<std::string, std::uint64_t> values;
  bool fail_on_missing = true;
  std::vector<std::string> missing;
  std::optional<std::uint64_t> get(const std::string &key, const typet &type) override;
};

struct interp_violation
{
  property_class property = property_class::USER_ASSERT;
  int line = 0;
  std::string function;
  std::string detail;
  std::string rendered;
  int depth = 1; // minimal unwind bound that reaches this claim
};

enum class interp_status
{
  FINISHED,        // reached END of the entry function
  VIOLATION,       // a claim failed
  ASSUME_FALSE,    // an assumption cut the path
  NEED_NONDET,     // nondet source returned nullopt
  STEP_LIMIT,      // ran out of steps
  RUNTIME_ERROR    // internal error (bad model etc.)
};

struct interp_result
{
  interp_status status = interp_status::FINISHED;
  std::optional<interp_violation> violation;
  std::string pending_key; // NEED_NONDET: the key that was requested
  typet pending_type;
  std::vector<std::uint64_t> pending_pointer_domain; // candidate values
  std::int64_t steps = 0;
  int max_depth_seen = 1; // max loop iteration / recursion on the run
  std::vector<std::pair<int, std::string>> events; // (line, text) trace
};

struct interp_options
{
  std::int64_t step_limit = 2'000'000;
  int unwind_for_keys = 0; // unused; keys do not depend on the bound
  bool record_events = false;
};

/// Execute `function` from the model concretely. The interpreter
/// evaluates instrumented ASSERT instructions and additionally applies
/// the heap rules of the object model; the first failed claim ends the
/// run.
interp_result interpret(
  const goto_model &model,
  const std::string &function,
  nondet_source &nondet,
  const interp_options &opts = {});

} // namespace kbmc

#endif
