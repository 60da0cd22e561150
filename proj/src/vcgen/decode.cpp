#include "vcgen/decode.h"

#include "util/arith.h"
#include "util/errors.h"
#include "vcgen/enumerator.h"

namespace kbmc
{

namespace
{

std::string render_value(std::uint64_t bits, const typet &t)
{
  if(!t)
    return std::to_string(bits);
  if(t->is_bool())
    return bits ? "TRUE" : "FALSE";
  if(t->is_pointer())
  {
    if(bits == 0)
      return "NULL";
    if(pointer_obj(bits) == OBJ_INVALID)
      return "INVALID";
    return "&dynamic_object_" + std::to_string(pointer_obj(bits)) + "[" +
           std::to_string(pointer_off(bits)) + "]";
  }
  if(t->is_signed())
    return std::to_string(sext(bits, t->width));
  return std::to_string(bits);
}

} // namespace

counterexample decode_counterexample(const ssa_trace &t, const solver_verdict &v)
{
  if(v.status != solver_status::SAT)
    throw model_gap("(no model: verdict is not SAT)");

  counterexample cex;
  cex.depth = t.unwind_bound;

  // execution states: inputs (free events) and assignments to
  // source-level variables whose guard holds under the model
  std::size_t next_event = 0;
  auto flush_events = [&](std::size_t upto) {
    for(; next_event < t.free_events.size() &&
          t.free_events[next_event].at_step <= upto;
        next_event++)
    {
      const free_event &ev = t.free_events[next_event];
      auto it = v.model.find(ev.symbol);
      if(it == v.model.end() || it->second.is_array)
        continue;
      auto dt = t.decls.find(ev.symbol);
      cex_state state;
      state.file = ev.file;
      state.line = ev.source_line;
      state.function = ev.function;
      state.assignments[ev.display] = render_value(
        it->second.scalar, dt != t.decls.end() ? dt->second : nullptr);
      cex.states.push_back(std::move(state));
    }
  };
  for(std::size_t i = 0; i < t.steps.size(); i++)
  {
    flush_events(i);
    const ssa_step &st = t.steps[i];
    if(st.kind != ssa_step_kind::ASSIGNMENT || st.display.empty())
      continue;
    if(eval_under_model(st.guard, v.model) == 0)
      continue;
    auto it = v.model.find(st.lhs);
    if(it == v.model.end())
      throw model_gap(st.lhs);
    if(it->second.is_array)
      continue; // whole-array states are not reported
    cex_state state;
    state.file = st.file;
    state.line = st.source_line;
    state.function = st.function;
    state.assignments[st.display] = render_value(it->second.scalar, st.lhs_type);
    cex.states.push_back(std::move(state));
  }
  flush_events(t.steps.size());

  // first violated claim in step order, honoring assumption prefixes
  bool found = false;
  bool assumptions_hold = true;
  for(const auto &st : t.steps)
  {
    if(st.kind == ssa_step_kind::ASSUMPTION)
    {
      if(eval_under_model(st.guard, v.model) != 0 &&
         eval_under_model(st.cond, v.model) == 0)
        assumptions_hold = false;
      continue;
    }
    if(st.kind != ssa_step_kind::CLAIM || !assumptions_hold)
      continue;
    if(eval_under_model(st.guard, v.model) != 0 &&
       eval_under_model(st.cond, v.model) == 0)
    {
      cex.violated.property = st.property;
      cex.violated.line = st.source_line;
      cex.violated.function = st.function;
      cex.violated.file = st.file;
      cex.violated.detail = st.detail;
      cex.violated.rendered = render_violation(st.property, st.detail);
      found = true;
      break;
    }
  }
  if(!found)
    throw model_gap("(model violates no claim)");

  // nondet substitutions for replay
  for(const auto &[symbol, key] : t.nondet_keys)
  {
    auto it = v.model.find(symbol);
    if(it == v.model.end())
      continue; // sliced away: never read on the path
    if(it->second.is_array)
    {
      for(std::size_t i = 0; i < it->second.cells.size(); i++)
        cex.nondet_values[key + "[" + std::to_string(i) + "]"] =
          it->second.cells[i];
    }
    else
      cex.nondet_values[key] = it->second.scalar;
  }

  return cex;
}

} // namespace kbmc
