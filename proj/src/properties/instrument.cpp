#include "properties/instrument.h"

namespace kbmc
{

namespace
{

std::string display_name(const std::string &unique)
{
  auto dollar = unique.find('$');
  return dollar == std::string::npos ? unique : unique.substr(0, dollar);
}

class instrumenter
{
public:
  instrumenter(const goto_program &gp, const property_config &cfg)
    : gp_(gp), cfg_(cfg)
  {
  }

  goto_program run()
  {
    goto_program out;
    out.function = gp_.function;
    out.file = gp_.file;
    out.params = gp_.params;
    out.return_type = gp_.return_type;
    out.end_line = gp_.end_line;
    out.check_leaks = cfg_.memory_leaks;

    std::vector<int> new_index(gp_.instructions.size());
    for(const auto &in : gp_.instructions)
    {
      new_index[in.index] = static_cast<int>(out.instructions.size());
      line_ = in.source_line;
      claims_.clear();

      switch(in.kind)
      {
      case goto_kind::ASSIGN:
        walk(in.rhs, false);
        walk_lvalue(in.lhs);
        break;
      case goto_kind::ASSUME:
      case goto_kind::ASSERT:
        walk(in.rhs, false);
        break;
      case goto_kind::GOTO:
        walk(in.guard, false);
        break;
      case goto_kind::FUNCTION_CALL:
        for(const auto &a : in.args)
          walk(a, false);
        if(in.lhs)
          walk_lvalue(in.lhs);
        break;
      case goto_kind::MALLOC:
        walk(in.rhs, false);
        walk_lvalue(in.lhs);
        break;
      case goto_kind::FREE:
        walk(in.rhs, false);
        if(cfg_.class_enabled(property_class::DOUBLE_FREE))
          claim(ex::can_free(in.rhs), property_class::DOUBLE_FREE, "");
        break;
      case goto_kind::DECL:
      case goto_kind::HAVOC:
      case goto_kind::END:
        break;
      }

      for(auto &c : claims_)
      {
        c.index = static_cast<int>(out.instructions.size());
        out.instructions.push_back(std::move(c));
      }
      goto_instruction copy = in;
      copy.index = static_cast<int>(out.instructions.size());
      out.instructions.push_back(std::move(copy));
    }

    for(auto &in : out.instructions)
      if(in.kind == goto_kind::GOTO)
        in.target = new_index[in.target];
    return out;
  }

private:
  const goto_program &gp_;
  const property_config &cfg_;
  int line_ = 0;
  std::vector<goto_instruction> claims_;

  void claim(exprt cond, property_class pc, const std::string &detail)
  {
    goto_instruction a;
    a.kind = goto_kind::ASSERT;
    a.rhs = std::move(cond);
    a.property = pc;
    a.detail = detail;
    a.source_line = line_;
    claims_.push_back(std::move(a));
  }

  void claim_deref(const exprt &pointer)
  {
    if(!cfg_.class_enabled(property_class::NULL_DEREF))
      return;
    exprt obj = ex::ptr_obj(pointer);
    exprt is_null = ex::eq(obj, ex::int_const(0, ty::uint(32)));
    claim(ex::not_(is_null), property_class::NULL_DEREF, "");
    // NULL is reported by the claim above; this one catches dangling,
    // out-of-bounds and type-mismatched pointers
    claim(
      ex::or_(is_null, ex::valid_deref(pointer)),
      property_class::INVALID_POINTER,
      "");
  }

  void walk_lvalue(const exprt &e)
  {
    if(!e)
      return;
    switch(e->kind)
    {
    case expr_kind::SYMBOL:
      return;
    case expr_kind::INDEX:
    {
      walk(e->args[1], false);
      if(cfg_.class_enabled(property_class::BUFFER_OVERFLOW))
        claim(
          bounds_condition(e),
          property_class::BUFFER_OVERFLOW,
          display_name(e->args[0]->symbol));
      return;
    }
    case expr_kind::DEREF:
      walk(e->args[0], false);
      claim_deref(e->args[0]);
      return;
    default:
      return;
    }
  }

  exprt bounds_condition(const exprt &index_expr)
  {
    const exprt &idx = index_expr->args[1];
    std::int64_t len = index_expr->args[0]->type->array_length;
    return ex::and_(
      ex::binary(binary_op::GE, idx, ex::int_const(0, idx->type), ty::boolean()),
      ex::binary(binary_op::LT, idx, ex::int_const(len, idx->type), ty::boolean()));
  }

  // post-order over a read expression
  void walk(const exprt &e, bool /*unused*/)
  {
    if(!e)
      return;
    for(const auto &a : e->args)
      walk(a, false);

    switch(e->kind)
    {
    case expr_kind::BINARY:
      switch(e->bop)
      {
      case binary_op::DIV:
      case binary_op::REM:
        if(e->type->is_integer() && cfg_.class_enabled(property_class::DIV_BY_ZERO))
          claim(
            ex::binary(
              binary_op::NE, e->args[1], ex::int_const(0, e->args[1]->type), ty::boolean()),
            property_class::DIV_BY_ZERO,
            "");
        break;
      case binary_op::ADD:
      case binary_op::SUB:
      case binary_op::MUL:
      case binary_op::SHL:
        if(e->type->is_signed() && cfg_.overflow)
        {
          property_class pc =
            e->bop == binary_op::ADD ? property_class::ARITH_OVERFLOW_ADD
            : e->bop == binary_op::SUB ? property_class::ARITH_OVERFLOW_SUB
            : e->bop == binary_op::MUL ? property_class::ARITH_OVERFLOW_MUL
                                       : property_class::ARITH_OVERFLOW_SHL;
          claim(ex::no_overflow(e->bop, e->args[0], e->args[1]), pc, "");
        }
        break;
      default:
        break;
      }
      return;

    case expr_kind::INDEX:
      if(cfg_.class_enabled(property_class::IMPROPER_BUFFER_ACCESS))
        claim(bounds_condition(e), property_class::IMPROPER_BUFFER_ACCESS, "");
      return;

    case expr_kind::DEREF:
      claim_deref(e->args[0]);
      return;

    default:
      return;
    }
  }
};

} // namespace

goto_program instrument(const goto_program &gp, const property_config &cfg)
{
  instrumenter ins(gp, cfg);
  return ins.run();
}

} // namespace kbmc
