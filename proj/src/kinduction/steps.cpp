#include <chrono>

#include "frontend/lowering.h"
#include "kinduction/engine.h"
#include "properties/instrument.h"
#include "symex/propagate.h"
#include "symex/slice.h"
#include "symex/unroll.h"
#include "util/errors.h"
#include "vcgen/decode.h"
#include "vcgen/enumerator.h"
#include "vcgen/smt_solver.h"

namespace kbmc
{

const char *winning_step_name(winning_step_kind w)
{
  switch(w)
  {
  case winning_step_kind::BASE_CASE: return "base-case";
  case winning_step_kind::FORWARD_CONDITION: return "forward-condition";
  case winning_step_kind::INDUCTIVE_STEP: return "inductive-step";
  case winning_step_kind::NONE: return "none";
  }
  return "?";
}

goto_model prepare_model(
  const goto_model &raw,
  const std::string &entry,
  const property_config &checks)
{
  goto_model out;
  out.structs = raw.structs;
  for(const auto &[name, gp] : raw.functions)
  {
    if(name == entry)
      out.functions.emplace(name, instrument(mark_entry_nondet(gp), checks));
    else
      out.functions.emplace(name, instrument(gp, checks));
  }
  return out;
}

ssa_trace make_trace(const step_context &ctx, int k, symex_mode mode, bool optimize)
{
  unroll_options opts;
  opts.step_budget = ctx.cfg.step_budget;
  opts.timeout = ctx.cfg.overall.armed() ? &ctx.cfg.overall : nullptr;
  // the incremental engines always cut exhausted loops; only
  // bmc_single_shot turns unwinding claims on, in its own pipeline
  opts.unwinding_claims = false;
  ssa_trace t = unroll(*ctx.model, ctx.entry, k, mode, opts);
  if(optimize)
    t = slice(constant_propagate(t));
  return t;
}

solver_verdict solve(
  const formula &f,
  double timeout_seconds,
  const backend_selector &backend,
  bool *fallback)
{
  if(fallback)
    *fallback = false;
  if(backend.kind == backend_kind::SMT)
  {
    try
    {
      smt_options so;
      so.solver_path = backend.solver_path;
      so.timeout_seconds = timeout_seconds;
      return solve_with_smt(f, so);
    }
    catch(const backend_unavailable &)
    {
      if(fallback)
        *fallback = true;
      // fall through to the enumerator
    }
  }
  enum_options eo;
  deadline dl;
  if(timeout_seconds > 0)
  {
    dl = deadline::after_seconds(timeout_seconds);
    eo.timeout = &dl;
  }
  return solve_with_enumerator(f, eo);
}

namespace
{

double call_budget(const step_context &ctx)
{
  return ctx.cfg.per_call_timeout;
}

} // namespace

base_case_result base_case(const step_context &ctx, int k)
{
  base_case_result r;
  try
  {
    ssa_trace t = make_trace(ctx, k, symex_mode::BASE_CASE);
    formula f = build_base_case(t);
    solver_verdict v = solve(f, call_budget(ctx), ctx.cfg.backend, &r.backend_fallback);
    switch(v.status)
    {
    case solver_status::SAT:
    {
      counterexample cex = decode_counterexample(t, v);
      cex.function = ctx.entry;
      cex.checks.memory_leaks = ctx.checks.memory_leaks;
      cex.checks.overflow = ctx.checks.overflow;
      cex.checks.pointer_checks = ctx.checks.pointer_checks;
      cex.checks.bounds_checks = ctx.checks.bounds_checks;
      cex.checks.div_by_zero = ctx.checks.div_by_zero;
      r.outcome = base_case_outcome::CEX_FOUND;
      r.cex = std::move(cex);
      return r;
    }
    case solver_status::UNSAT:
      r.outcome = base_case_outcome::CLEAN;
      return r;
    case solver_status::UNKNOWN:
      r.outcome = base_case_outcome::UNKNOWN;
      r.reason = v.reason;
      return r;
    }
  }
  catch(const unwind_overflow &e)
  {
    r.reason = e.what();
  }
  catch(const budget_exceeded &e)
  {
    r.reason = e.what();
  }
  catch(const encoding_error &e)
  {
    r.reason = e.what();
  }
  catch(const model_gap &e)
  {
    r.reason = e.what();
  }
  r.outcome = base_case_outcome::UNKNOWN;
  return r;
}

forward_outcome forward_condition(const step_context &ctx, int k, std::string *reason)
{
  try
  {
    ssa_trace t = make_trace(ctx, k, symex_mode::FORWARD_CONDITION);
    formula f = build_forward_condition(t);
    solver_verdict v = solve(f, call_budget(ctx), ctx.cfg.backend, nullptr);
    if(v.status == solver_status::UNSAT)
      return forward_outcome::TERMINATED;
    if(v.status == solver_status::SAT)
      return forward_outcome::NOT_YET;
    if(reason)
      *reason = v.reason;
  }
  catch(const std::exception &e)
  {
    if(reason)
      *reason = e.what();
  }
  return forward_outcome::UNKNOWN;
}

inductive_outcome inductive_step(const step_context &ctx, int k, std::string *reason)
{
  try
  {
    ssa_trace t = make_trace(ctx, k, symex_mode::INDUCTIVE_STEP);
    if(t.recursion_frontier_hit)
    {
      // cutting recursion inside the inductive step would be unsound
      if(reason)
        *reason = "recursion frontier in inductive step";
      return inductive_outcome::UNKNOWN;
    }
    formula f = build_inductive_step(t);
    solver_verdict v = solve(f, call_budget(ctx), ctx.cfg.backend, nullptr);
    if(v.status == solver_status::UNSAT)
      return inductive_outcome::INDUCTIVE;
    if(v.status == solver_status::SAT)
      return inductive_outcome::NOT_INDUCTIVE;
    if(reason)
      *reason = v.reason;
  }
  catch(const std::exception &e)
  {
    if(reason)
      *reason = e.what();
  }
  return inductive_outcome::UNKNOWN;
}

namespace
{

double seconds_since(const std::chrono::steady_clock::time_point &start)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
    .count();
}

} // namespace

verdict kinduction_sequential(const step_context &ctx)
{
  auto start = std::chrono::steady_clock::now();
  verdict v;
  for(int k = 1; k <= ctx.cfg.max_iterations; k++)
  {
    v.k_final = k;
    if(ctx.cfg.overall.expired())
    {
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = "timeout";
      break;
    }

    base_case_result b = base_case(ctx, k);
    v.backend_fallback = v.backend_fallback || b.backend_fallback;
    if(b.outcome == base_case_outcome::CEX_FOUND)
    {
      v.status = verdict_status::FALSE_VERDICT;
      v.winning_step = winning_step_kind::BASE_CASE;
      v.cex = std::move(b.cex);
      break;
    }
    if(b.outcome == base_case_outcome::UNKNOWN)
    {
      // without the base case, neither TRUE nor FALSE is sound
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = b.reason.empty() ? "base case inconclusive" : b.reason;
      break;
    }

    if(forward_condition(ctx, k) == forward_outcome::TERMINATED)
    {
      v.status = verdict_status::TRUE_VERDICT;
      v.winning_step = winning_step_kind::FORWARD_CONDITION;
      break;
    }

    if(inductive_step(ctx, k) == inductive_outcome::INDUCTIVE)
    {
      v.status = verdict_status::TRUE_VERDICT;
      v.winning_step = winning_step_kind::INDUCTIVE_STEP;
      break;
    }
  }
  if(v.status == verdict_status::UNKNOWN_VERDICT && v.unknown_reason.empty())
    v.unknown_reason = "max iterations reached";
  v.wall_time = seconds_since(start);
  return v;
}

verdict bmc_incremental(const step_context &ctx)
{
  auto start = std::chrono::steady_clock::now();
  verdict v;
  for(int k = 1; k <= ctx.cfg.max_iterations; k++)
  {
    v.k_final = k;
    if(ctx.cfg.overall.expired())
    {
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = "timeout";
      break;
    }

    base_case_result b = base_case(ctx, k);
    v.backend_fallback = v.backend_fallback || b.backend_fallback;
    if(b.outcome == base_case_outcome::CEX_FOUND)
    {
      v.status = verdict_status::FALSE_VERDICT;
      v.winning_step = winning_step_kind::BASE_CASE;
      v.cex = std::move(b.cex);
      break;
    }
    if(b.outcome == base_case_outcome::UNKNOWN)
    {
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = b.reason.empty() ? "base case inconclusive" : b.reason;
      break;
    }

    if(forward_condition(ctx, k) == forward_outcome::TERMINATED)
    {
      v.status = verdict_status::TRUE_VERDICT;
      v.winning_step = winning_step_kind::FORWARD_CONDITION;
      break;
    }
  }
  if(v.status == verdict_status::UNKNOWN_VERDICT && v.unknown_reason.empty())
    v.unknown_reason = "max iterations reached";
  v.wall_time = seconds_since(start);
  return v;
}

verdict bmc_single_shot(const step_context &ctx, int bound)
{
  auto start = std::chrono::steady_clock::now();
  verdict v;
  v.k_final = bound;
  try
  {
    unroll_options opts;
    opts.step_budget = ctx.cfg.step_budget;
    opts.timeout = ctx.cfg.overall.armed() ? &ctx.cfg.overall : nullptr;
    opts.unwinding_claims = ctx.cfg.unwinding_assertions;
    ssa_trace t = unroll(*ctx.model, ctx.entry, bound, symex_mode::BASE_CASE, opts);
    t = slice(constant_propagate(t));
    formula f = build_base_case(t);
    solver_verdict sv =
      solve(f, ctx.cfg.per_call_timeout, ctx.cfg.backend, &v.backend_fallback);
    switch(sv.status)
    {
    case solver_status::SAT:
    {
      counterexample cex = decode_counterexample(t, sv);
      cex.function = ctx.entry;
      cex.checks.memory_leaks = ctx.checks.memory_leaks;
      cex.checks.overflow = ctx.checks.overflow;
      cex.checks.pointer_checks = ctx.checks.pointer_checks;
      cex.checks.bounds_checks = ctx.checks.bounds_checks;
      cex.checks.div_by_zero = ctx.checks.div_by_zero;
      v.status = verdict_status::FALSE_VERDICT;
      v.winning_step = winning_step_kind::BASE_CASE;
      v.cex = std::move(cex);
      break;
    }
    case solver_status::UNSAT:
      v.status = verdict_status::TRUE_VERDICT;
      v.winning_step = winning_step_kind::NONE; // bounded claim only
      break;
    case solver_status::UNKNOWN:
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = sv.reason;
      break;
    }
  }
  catch(const std::exception &e)
  {
    v.status = verdict_status::UNKNOWN_VERDICT;
    v.unknown_reason = e.what();
  }
  v.wall_time = seconds_since(start);
  return v;
}

verdict run_engine(const step_context &ctx)
{
  switch(ctx.cfg.mode)
  {
  case engine_mode::SEQUENTIAL:
    return kinduction_sequential(ctx);
  case engine_mode::PARALLEL:
    return kinduction_parallel(ctx);
  case engine_mode::INCREMENTAL_BMC_ONLY:
    return bmc_incremental(ctx);
  }
  return {};
}

} // namespace kbmc
