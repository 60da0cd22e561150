/*******************************************************************\

Module: Verification engine interface

\*******************************************************************/

#ifndef KBMC_KINDUCTION_ENGINE_H
#define KBMC_KINDUCTION_ENGINE_H

#include <optional>
#include <string>

#include "frontend/goto_program.h"
#include "properties/property.h"
#include "symex/ssa.h"
#include "vcgen/counterexample.h"
#include "vcgen/formula.h"

namespace kbmc
{

enum class backend_kind
{
  ENUMERATOR,
  SMT
};

struct backend_selector
{
  backend_kind kind = backend_kind::ENUMERATOR;
  std::string solver_path; // SMT backend binary
};

enum class engine_mode
{
  SEQUENTIAL,
  PARALLEL,
  INCREMENTAL_BMC_ONLY
};

struct engine_config
{
  int max_iterations = 50;
  engine_mode mode = engine_mode::SEQUENTIAL;
  double per_call_timeout = 0; // seconds per solver call; 0 = none
  bool unwinding_assertions = true; // plain BMC only; -nu clears it
  backend_selector backend;
  std::int64_t step_budget = 1'000'000;
  deadline overall; // driver-imposed wall clock budget
};

enum class verdict_status
{
  TRUE_VERDICT,
  FALSE_VERDICT,
  UNKNOWN_VERDICT
};

enum class winning_step_kind
{
  BASE_CASE,
  FORWARD_CONDITION,
  INDUCTIVE_STEP,
  NONE
};

const char *winning_step_name(winning_step_kind w);

struct verdict
{
  verdict_status status = verdict_status::UNKNOWN_VERDICT;
  winning_step_kind winning_step = winning_step_kind::NONE;
  int k_final = 0;
  double wall_time = 0;
  std::optional<counterexample> cex;
  std::string unknown_reason;
  bool backend_fallback = false; // SMT binary missing, enumerator used
};

/// Instrument all functions and havoc the entry's parameters; the
/// result is what the engines and the replay oracle execute.
goto_model prepare_model(
  const goto_model &raw,
  const std::string &entry,
  const property_config &checks);

// The three proof steps (Alg. 1 building blocks). Each runs the full
// pipeline: unroll, propagate, slice, build, solve.

enum class base_case_outcome
{
  CEX_FOUND,
  CLEAN,
  UNKNOWN
};

struct base_case_result
{
  base_case_outcome outcome = base_case_outcome::UNKNOWN;
  std::optional<counterexample> cex;
  std::string reason;
  bool backend_fallback = false;
};

enum class forward_outcome
{
  TERMINATED,
  NOT_YET,
  UNKNOWN
};

enum class inductive_outcome
{
  INDUCTIVE,
  NOT_INDUCTIVE,
  UNKNOWN
};

struct step_context
{
  const goto_model *model = nullptr; // prepared
  std::string entry;
  property_config checks;
  engine_config cfg;
};

base_case_result base_case(const step_context &ctx, int k);
forward_outcome forward_condition(const step_context &ctx, int k, std::string *reason = nullptr);
inductive_outcome inductive_step(const step_context &ctx, int k, std::string *reason = nullptr);

/// Alg. 1: k = 1..max; base case, then forward condition, then
/// inductive step.
verdict kinduction_sequential(const step_context &ctx);

/// Eq. 4: unsafe on B(k) SAT, safe on F(k) UNSAT, else k+1. No
/// inductive step.
verdict bmc_incremental(const step_context &ctx);

/// Single-shot BMC at a fixed bound (driver default mode). With
/// unwinding_assertions, exhausted loops are reported as UNWINDING
/// violations.
verdict bmc_single_shot(const step_context &ctx, int bound);

/// Three isolated worker processes racing base case, forward condition
/// (at k+1) and inductive step (at k+1); first conclusive result wins.
verdict kinduction_parallel(const step_context &ctx);

/// Dispatch on cfg.mode.
verdict run_engine(const step_context &ctx);

/// Shared pipeline used by the steps and by --dump-ssa.
ssa_trace make_trace(
  const step_context &ctx,
  int k,
  symex_mode mode,
  bool optimize = true);

solver_verdict solve(
  const formula &f,
  double timeout_seconds,
  const backend_selector &backend,
  bool *fallback = nullptr);

} // namespace kbmc

#endif
