#include "symex/propagate.h"

#include "util/arith.h"

namespace kbmc
{

namespace
{

bool all_const(const exprt &e)
{
  for(const auto &a : e->args)
    if(!is_constant(a))
      return false;
  return true;
}

} // namespace

exprt fold_expr(const exprt &e, const std::map<std::string, exprt> &consts)
{
  if(!e)
    return e;
  switch(e->kind)
  {
  case expr_kind::CONSTANT:
    return e;
  case expr_kind::SYMBOL:
  {
    auto it = consts.find(e->symbol);
    return it != consts.end() ? it->second : e;
  }
  default:
    break;
  }

  auto n = std::make_shared<expr_node>(*e);
  for(auto &a : n->args)
    a = fold_expr(a, consts);
  exprt folded = n;

  switch(folded->kind)
  {
  case expr_kind::UNARY:
    if(all_const(folded))
      return ex::constant(
        eval_unary_bits(folded->uop, folded->args[0]->bits, folded->args[0]->type),
        folded->type);
    break;

  case expr_kind::BINARY:
  {
    const exprt &a = folded->args[0];
    const exprt &b = folded->args[1];
    if(all_const(folded))
      return ex::constant(eval_binary_bits(folded->bop, a->bits, b->bits, a->type), folded->type);
    // boolean simplifications with one constant side
    if(folded->bop == binary_op::LOG_AND)
      return ex::and_(a, b);
    if(folded->bop == binary_op::LOG_OR)
      return ex::or_(a, b);
    // reflexive comparisons of identical operands
    if(expr_equal(a, b))
    {
      switch(folded->bop)
      {
      case binary_op::EQ:
      case binary_op::LE:
      case binary_op::GE:
        return ex::bool_const(true);
      case binary_op::NE:
      case binary_op::LT:
      case binary_op::GT:
        return ex::bool_const(false);
      default:
        break;
      }
    }
    break;
  }

  case expr_kind::ITE:
    if(is_true(folded->args[0]))
      return folded->args[1];
    if(is_false(folded->args[0]))
      return folded->args[2];
    break;

  case expr_kind::CAST:
    if(is_constant(folded->args[0]))
      return ex::constant(
        convert_bits(folded->args[0]->bits, folded->args[0]->type, folded->type),
        folded->type);
    break;

  case expr_kind::NO_OVERFLOW:
    if(all_const(folded))
      return ex::bool_const(no_signed_overflow(
        folded->bop, folded->args[0]->bits, folded->args[1]->bits,
        folded->args[0]->type));
    break;

  case expr_kind::PTR_OBJ:
    if(is_constant(folded->args[0]))
      return ex::constant(pointer_obj(folded->args[0]->bits), folded->type);
    break;

  case expr_kind::PTR_OFF:
    if(is_constant(folded->args[0]))
      return ex::constant(
        static_cast<std::uint32_t>(pointer_off(folded->args[0]->bits)),
        folded->type);
    break;

  case expr_kind::INDEX:
  {
    // select-of-store with comparable indices
    exprt arr = folded->args[0];
    const exprt &idx = folded->args[1];
    while(arr->kind == expr_kind::STORE && is_constant(idx))
    {
      const exprt &sidx = arr->args[1];
      if(!is_constant(sidx))
        break;
      if(bits_to_signed(sidx->bits, sidx->type) == bits_to_signed(idx->bits, idx->type))
        return arr->args[2];
      arr = arr->args[0];
    }
    if(arr != folded->args[0])
      return ex::index(arr, idx);
    break;
  }

  default:
    break;
  }
  return folded;
}

ssa_trace constant_propagate(const ssa_trace &t)
{
  ssa_trace out = t;
  std::map<std::string, exprt> consts;

  for(auto &st : out.steps)
  {
    st.guard = fold_expr(st.guard, consts);
    if(st.kind == ssa_step_kind::ASSIGNMENT)
    {
      st.rhs = fold_expr(st.rhs, consts);
      if(is_constant(st.rhs) && !st.rhs->type->is_array())
        consts[st.lhs] = st.rhs;
      // copy propagation through plain symbol aliases
      else if(st.rhs->kind == expr_kind::SYMBOL)
        consts[st.lhs] = st.rhs;
    }
    else
      st.cond = fold_expr(st.cond, consts);
  }
  return out;
}

} // namespace kbmc
