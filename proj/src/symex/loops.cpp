#include "symex/loops.h"

#include <algorithm>

#include "util/errors.h"

namespace kbmc
{

std::vector<loop_info> find_loops(const goto_program &gp)
{
  std::vector<loop_info> loops;
  for(const auto &in : gp.instructions)
  {
    if(in.kind != goto_kind::GOTO || in.target > in.index)
      continue;
    loop_info l;
    l.head = in.target;
    l.back = in.index;
    for(int i = l.head; i <= l.back; i++)
    {
      const auto &cand = gp.instructions[i];
      if(cand.kind == goto_kind::GOTO && cand.target > l.back)
      {
        l.exit_goto = i;
        break;
      }
    }
    loops.push_back(l);
  }

  // lowered loops are contiguous and properly nested: ranges either
  // disjoint or one inside the other, one back edge per head
  for(const auto &a : loops)
    for(const auto &b : loops)
    {
      if(a.head == b.head && a.back == b.back)
        continue;
      if(a.head == b.head)
        throw type_error(0, "irreducible control flow: shared loop head");
      bool disjoint = a.back < b.head || b.back < a.head;
      bool a_in_b = a.head > b.head && a.back < b.back;
      bool b_in_a = b.head > a.head && b.back < a.back;
      if(!disjoint && !a_in_b && !b_in_a)
        throw type_error(0, "irreducible control flow: overlapping loops");
    }

  std::sort(loops.begin(), loops.end(), [](const loop_info &a, const loop_info &b) {
    return a.head < b.head;
  });
  return loops;
}

namespace
{

void collect_assigned(const goto_instruction &in, std::set<std::string> &out)
{
  switch(in.kind)
  {
  case goto_kind::ASSIGN:
  case goto_kind::MALLOC:
    if(in.lhs->kind == expr_kind::SYMBOL)
      out.insert(in.lhs->symbol);
    else if(in.lhs->kind == expr_kind::INDEX)
      out.insert(in.lhs->args[0]->symbol);
    // heap stores through pointers modify objects, not named variables;
    // the unroller havocs heap state separately
    break;
  case goto_kind::HAVOC:
    out.insert(in.symbol);
    break;
  case goto_kind::FUNCTION_CALL:
    if(in.lhs && in.lhs->kind == expr_kind::SYMBOL)
      out.insert(in.lhs->symbol);
    else if(in.lhs && in.lhs->kind == expr_kind::INDEX)
      out.insert(in.lhs->args[0]->symbol);
    break;
  default:
    break;
  }
}

} // namespace

std::set<std::string> loop_modified_vars_of(const goto_program &gp, const loop_info &loop)
{
  std::set<std::string> out;
  for(int i = loop.head; i <= loop.back; i++)
    collect_assigned(gp.instructions[i], out);
  return out;
}

std::set<std::string> loop_modified_vars(const goto_program &gp)
{
  std::set<std::string> out;
  for(const auto &l : find_loops(gp))
  {
    auto vars = loop_modified_vars_of(gp, l);
    out.insert(vars.begin(), vars.end());
  }
  return out;
}

} // namespace kbmc
