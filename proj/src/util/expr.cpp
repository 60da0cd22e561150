#include "util/expr.h"

#include <cassert>

namespace kbmc
{

namespace
{
std::uint64_t truncate_bits(std::uint64_t bits, int width)
{
  if(width >= 64)
    return bits;
  return bits & ((std::uint64_t(1) << width) - 1);
}
} // namespace

namespace ex
{

exprt constant(std::uint64_t bits, typet type)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::CONSTANT;
  n->type = std::move(type);
  int w = n->type->is_bool() ? 1 : n->type->width;
  n->bits = truncate_bits(bits, w);
  return n;
}

exprt int_const(std::int64_t value, typet type)
{
  return constant(static_cast<std::uint64_t>(value), std::move(type));
}

exprt bool_const(bool value)
{
  return constant(value ? 1 : 0, ty::boolean());
}

exprt null_pointer(typet pointer_type)
{
  return constant(0, std::move(pointer_type));
}

exprt symbol(const std::string &name, typet type)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::SYMBOL;
  n->symbol = name;
  n->type = std::move(type);
  return n;
}

exprt unary(unary_op op, exprt a)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::UNARY;
  n->uop = op;
  n->type = op == unary_op::LOG_NOT ? ty::boolean() : a->type;
  n->args = {std::move(a)};
  return n;
}

exprt binary(binary_op op, exprt a, exprt b, typet type)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::BINARY;
  n->bop = op;
  n->type = std::move(type);
  n->args = {std::move(a), std::move(b)};
  return n;
}

exprt ite(exprt cond, exprt then_e, exprt else_e)
{
  if(is_true(cond))
    return then_e;
  if(is_false(cond))
    return else_e;
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::ITE;
  n->type = then_e->type;
  n->args = {std::move(cond), std::move(then_e), std::move(else_e)};
  return n;
}

exprt cast(exprt a, typet to)
{
  if(same_type(a->type, to))
    return a;
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::CAST;
  n->type = std::move(to);
  n->args = {std::move(a)};
  return n;
}

exprt index(exprt array, exprt idx)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::INDEX;
  n->type = array->type->sub;
  n->args = {std::move(array), std::move(idx)};
  return n;
}

exprt store(exprt array, exprt idx, exprt value)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::STORE;
  n->type = array->type;
  n->args = {std::move(array), std::move(idx), std::move(value)};
  return n;
}

exprt deref(exprt pointer, int field, typet cell_type)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::DEREF;
  n->field = field;
  n->type = std::move(cell_type);
  n->args = {std::move(pointer)};
  return n;
}

exprt ptr_obj(exprt pointer)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::PTR_OBJ;
  n->type = ty::uint(32);
  n->args = {std::move(pointer)};
  return n;
}

exprt ptr_off(exprt pointer)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::PTR_OFF;
  n->type = ty::sint(32);
  n->args = {std::move(pointer)};
  return n;
}

exprt valid_deref(exprt pointer)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::VALID_DEREF;
  n->type = ty::boolean();
  n->args = {std::move(pointer)};
  return n;
}

exprt can_free(exprt pointer)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::CAN_FREE;
  n->type = ty::boolean();
  n->args = {std::move(pointer)};
  return n;
}

exprt live_obj(std::uint32_t key)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::LIVE_OBJ;
  n->type = ty::boolean();
  n->object_key = key;
  return n;
}

exprt no_overflow(binary_op op, exprt a, exprt b)
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::NO_OVERFLOW;
  n->bop = op;
  n->type = ty::boolean();
  n->args = {std::move(a), std::move(b)};
  return n;
}

exprt not_(exprt a)
{
  if(is_true(a))
    return bool_const(false);
  if(is_false(a))
    return bool_const(true);
  return unary(unary_op::LOG_NOT, std::move(a));
}

exprt and_(exprt a, exprt b)
{
  if(is_true(a))
    return b;
  if(is_true(b))
    return a;
  if(is_false(a) || is_false(b))
    return bool_const(false);
  return binary(binary_op::LOG_AND, std::move(a), std::move(b), ty::boolean());
}

exprt or_(exprt a, exprt b)
{
  if(is_false(a))
    return b;
  if(is_false(b))
    return a;
  if(is_true(a) || is_true(b))
    return bool_const(true);
  return binary(binary_op::LOG_OR, std::move(a), std::move(b), ty::boolean());
}

exprt eq(exprt a, exprt b)
{
  return binary(binary_op::EQ, std::move(a), std::move(b), ty::boolean());
}

} // namespace ex

bool expr_equal(const exprt &a, const exprt &b)
{
  if(a == b)
    return true;
  if(!a || !b)
    return false;
  if(a->kind != b->kind || a->bits != b->bits || a->symbol != b->symbol ||
     a->uop != b->uop || a->bop != b->bop || a->field != b->field ||
     a->object_key != b->object_key || a->args.size() != b->args.size())
    return false;
  if(!same_type(a->type, b->type))
    return false;
  for(std::size_t i = 0; i < a->args.size(); i++)
    if(!expr_equal(a->args[i], b->args[i]))
      return false;
  return true;
}

bool is_true(const exprt &e)
{
  return e && e->kind == expr_kind::CONSTANT && e->type->is_bool() &&
         e->bits != 0;
}

bool is_false(const exprt &e)
{
  return e && e->kind == expr_kind::CONSTANT && e->type->is_bool() &&
         e->bits == 0;
}

bool is_constant(const exprt &e)
{
  return e && e->kind == expr_kind::CONSTANT;
}

namespace
{

const char *unary_op_str(unary_op op)
{
  switch(op)
  {
  case unary_op::NEG:
    return "-";
  case unary_op::LOG_NOT:
    return "!";
  case unary_op::BIT_NOT:
    return "~";
  }
  return "?";
}

const char *binary_op_str(binary_op op)
{
  switch(op)
  {
  case binary_op::ADD: return "+";
  case binary_op::SUB: return "-";
  case binary_op::MUL: return "*";
  case binary_op::DIV: return "/";
  case binary_op::REM: return "%";
  case binary_op::SHL: return "<<";
  case binary_op::SHR: return ">>";
  case binary_op::BIT_AND: return "&";
  case binary_op::BIT_OR: return "|";
  case binary_op::BIT_XOR: return "^";
  case binary_op::LOG_AND: return "&&";
  case binary_op::LOG_OR: return "||";
  case binary_op::EQ: return "==";
  case binary_op::NE: return "!=";
  case binary_op::LT: return "<";
  case binary_op::LE: return "<=";
  case binary_op::GT: return ">";
  case binary_op::GE: return ">=";
  }
  return "?";
}

} // namespace

std::string expr_to_string(const exprt &e)
{
  if(!e)
    return "<nil>";
  switch(e->kind)
  {
  case expr_kind::CONSTANT:
    if(e->type->is_bool())
      return e->bits ? "true" : "false";
    if(e->type->is_pointer())
    {
      if(e->bits == 0)
        return "NULL";
      return "ptr(" + std::to_string(pointer_obj(e->bits)) + "," +
             std::to_string(pointer_off(e->bits)) + ")";
    }
    if(e->type->is_signed())
    {
      // sign-extend for display
      std::uint64_t b = e->bits;
      int w = e->type->width;
      std::int64_t v;
      if(w < 64 && (b >> (w - 1)) & 1)
        v = static_cast<std::int64_t>(b | (~std::uint64_t(0) << w));
      else
        v = static_cast<std::int64_t>(b);
      return std::to_string(v);
    }
    return std::to_string(e->bits);
  case expr_kind::SYMBOL:
    return e->symbol;
  case expr_kind::UNARY:
    return std::string(unary_op_str(e->uop)) + "(" +
           expr_to_string(e->args[0]) + ")";
  case expr_kind::BINARY:
    return "(" + expr_to_string(e->args[0]) + " " + binary_op_str(e->bop) +
           " " + expr_to_string(e->args[1]) + ")";
  case expr_kind::ITE:
    return "ite(" + expr_to_string(e->args[0]) + ", " +
           expr_to_string(e->args[1]) + ", " + expr_to_string(e->args[2]) + ")";
  case expr_kind::CAST:
    return "(" + type_to_string(e->type) + ")(" + expr_to_string(e->args[0]) +
           ")";
  case expr_kind::INDEX:
    return expr_to_string(e->args[0]) + "[" + expr_to_string(e->args[1]) + "]";
  case expr_kind::STORE:
    return "store(" + expr_to_string(e->args[0]) + ", " +
           expr_to_string(e->args[1]) + ", " + expr_to_string(e->args[2]) + ")";
  case expr_kind::DEREF:
    return "deref(" + expr_to_string(e->args[0]) +
           (e->field >= 0 ? ", ." + std::to_string(e->field) : "") + ")";
  case expr_kind::PTR_OBJ:
    return "obj(" + expr_to_string(e->args[0]) + ")";
  case expr_kind::PTR_OFF:
    return "off(" + expr_to_string(e->args[0]) + ")";
  case expr_kind::VALID_DEREF:
    return "valid_deref(" + expr_to_string(e->args[0]) + ")";
  case expr_kind::CAN_FREE:
    return "can_free(" + expr_to_string(e->args[0]) + ")";
  case expr_kind::LIVE_OBJ:
    return "live_obj(" + std::to_string(e->object_key) + ")";
  case expr_kind::NO_OVERFLOW:
    return std::string("no_overflow_") + binary_op_str(e->bop) + "(" +
           expr_to_string(e->args[0]) + ", " + expr_to_string(e->args[1]) + ")";
  }
  return "<bad>";
}

} // namespace kbmc
