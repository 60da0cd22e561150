#include "vcgen/formula.h"

#include "util/errors.h"

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

formula build_from_trace(const ssa_trace &t, formula_role role)
{
  formula f;
  f.role = role;
  f.decls = t.decls;
  f.free_symbols = t.free_symbols;
  f.pointer_domains = t.pointer_domains;
  f.objects = t.objects;

  for(std::size_t i = 0; i < t.steps.size(); i++)
  {
    const ssa_step &st = t.steps[i];
    formula::item it;
    switch(st.kind)
    {
    case ssa_step_kind::ASSIGNMENT:
      it.kind = formula::item_kind::DEFINE;
      it.lhs = st.lhs;
      it.expr = st.rhs;
      break;
    case ssa_step_kind::ASSUMPTION:
      it.kind = formula::item_kind::CONSTRAIN;
      it.expr = ex::or_(ex::not_(st.guard), st.cond);
      break;
    case ssa_step_kind::CLAIM:
      it.kind = formula::item_kind::VIOLATION;
      it.expr = ex::and_(st.guard, ex::not_(st.cond));
      it.claim_step = i;
      break;
    }
    f.items.push_back(std::move(it));
  }
  return f;
}

} // namespace

bool formula::closed() const
{
  std::set<std::string> defined = free_symbols;
  for(const auto &it : items)
    if(it.kind == item_kind::DEFINE)
      defined.insert(it.lhs);
  for(const auto &it : items)
  {
    std::set<std::string> used;
    collect_symbols(it.expr, used);
    for(const auto &u : used)
      if(!defined.count(u))
        return false;
  }
  return true;
}

formula build_base_case(const ssa_trace &t)
{
  if(t.mode != symex_mode::BASE_CASE)
    throw encoding_error("base-case formula needs a base-case trace");
  return build_from_trace(t, formula_role::B);
}

formula build_forward_condition(const ssa_trace &t)
{
  if(t.mode != symex_mode::FORWARD_CONDITION)
    throw encoding_error("forward-condition formula needs a forward-condition trace");
  return build_from_trace(t, formula_role::F);
}

formula build_inductive_step(const ssa_trace &t)
{
  if(t.mode != symex_mode::INDUCTIVE_STEP)
    throw encoding_error("inductive-step formula needs an inductive-step trace");
  return build_from_trace(t, formula_role::S);
}

} // namespace kbmc
