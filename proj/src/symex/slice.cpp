#include "symex/slice.h"

namespace kbmc
{

namespace
{

void collect_symbols(const exprt &e, std::set<std::string> &out)
{
  if(!e)
    return;
  if(e->kind == expr_kind::SYMBOL)
    out.insert(e->symbol);
  for(const auto &a : e->args)
    collect_symbols(a, out);
}

} // namespace

ssa_trace slice(const ssa_trace &t)
{
  // strategy 1: nothing after the last claim matters
  std::size_t last_claim = 0;
  bool any_claim = false;
  for(std::size_t i = 0; i < t.steps.size(); i++)
    if(t.steps[i].kind == ssa_step_kind::CLAIM)
    {
      last_claim = i;
      any_claim = true;
    }

  ssa_trace out = t;
  out.steps.clear();
  out.unwinding_claim_steps.clear();
  if(!any_claim)
  {
    out.free_symbols.clear();
    return out;
  }

  std::vector<const ssa_step *> prefix;
  for(std::size_t i = 0; i <= last_claim; i++)
    prefix.push_back(&t.steps[i]);

  // strategy 2: backward cone of the claims and assumptions
  std::set<std::string> needed;
  for(const auto *st : prefix)
    if(st->kind != ssa_step_kind::ASSIGNMENT)
    {
      collect_symbols(st->cond, needed);
      collect_symbols(st->guard, needed);
    }

  std::vector<bool> keep(prefix.size(), false);
  for(std::size_t i = prefix.size(); i-- > 0;)
  {
    const ssa_step &st = *prefix[i];
    if(st.kind != ssa_step_kind::ASSIGNMENT)
    {
      keep[i] = true;
      continue;
    }
    if(needed.count(st.lhs))
    {
      keep[i] = true;
      collect_symbols(st.rhs, needed);
      collect_symbols(st.guard, needed);
    }
  }

  std::vector<std::size_t> new_pos(prefix.size() + 1, 0);
  for(std::size_t i = 0; i < prefix.size(); i++)
  {
    new_pos[i] = out.steps.size();
    if(keep[i])
    {
      if(prefix[i]->kind == ssa_step_kind::CLAIM && prefix[i]->unwinding)
        out.unwinding_claim_steps.push_back(out.steps.size());
      out.steps.push_back(*prefix[i]);
    }
  }
  new_pos[prefix.size()] = out.steps.size();

  // free symbols that survived
  std::set<std::string> used;
  for(const auto &st : out.steps)
  {
    collect_symbols(st.guard, used);
    collect_symbols(st.rhs, used);
    collect_symbols(st.cond, used);
  }
  std::set<std::string> free_kept;
  for(const auto &f : t.free_symbols)
    if(used.count(f))
      free_kept.insert(f);
  out.free_symbols = std::move(free_kept);

  out.free_events.clear();
  for(const auto &ev : t.free_events)
  {
    if(!out.free_symbols.count(ev.symbol))
      continue;
    free_event copy = ev;
    copy.at_step = new_pos[std::min(ev.at_step, prefix.size())];
    out.free_events.push_back(std::move(copy));
  }
  return out;
}

} // namespace kbmc
