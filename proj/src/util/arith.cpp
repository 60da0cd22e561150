#include "util/arith.h"

#include <cassert>

namespace kbmc
{

std::uint64_t trunc_bits(std::uint64_t bits, int width)
{
  if(width >= 64)
    return bits;
  return bits & ((std::uint64_t(1) << width) - 1);
}

std::int64_t sext(std::uint64_t bits, int width)
{
  if(width >= 64)
    return static_cast<std::int64_t>(bits);
  std::uint64_t b = trunc_bits(bits, width);
  if((b >> (width - 1)) & 1)
    return static_cast<std::int64_t>(b | (~std::uint64_t(0) << width));
  return static_cast<std::int64_t>(b);
}

std::int64_t bits_to_signed(std::uint64_t bits, const typet &t)
{
  if(t->is_signed())
    return sext(bits, t->width);
  if(t->is_bool())
    return bits ? 1 : 0;
  return static_cast<std::int64_t>(bits);
}

std::uint64_t convert_bits(std::uint64_t bits, const typet &from, const typet &to)
{
  if(to->is_bool())
    return bits != 0 ? 1 : 0;
  // widen with the source's signedness, then truncate to the target
  std::uint64_t wide;
  if(from->is_signed())
    wide = static_cast<std::uint64_t>(sext(bits, from->width));
  else if(from->is_bool())
    wide = bits ? 1 : 0;
  else
    wide = from->is_pointer() ? bits : trunc_bits(bits, from->width);
  int w = to->is_pointer() ? 64 : to->width;
  return trunc_bits(wide, w);
}

namespace
{

// Shift amounts are read as the unsigned interpretation of the rhs; a
// count >= width behaves like the SMT bitvector shifts (result 0, or
// sign-fill for arithmetic right shift).
std::uint64_t shift_left(std::uint64_t a, std::uint64_t count, int width)
{
  if(count >= static_cast<std::uint64_t>(width))
    return 0;
  return trunc_bits(a << count, width);
}

std::uint64_t shift_right(std::uint64_t a, std::uint64_t count, const typet &type)
{
  int width = type->width;
  std::uint64_t tb = trunc_bits(a, width);
  if(type->is_signed())
  {
    bool neg = (tb >> (width - 1)) & 1;
    if(count >= static_cast<std::uint64_t>(width))
      return neg ? trunc_bits(~std::uint64_t(0), width) : 0;
    std::int64_t sv = sext(tb, width);
    return trunc_bits(static_cast<std::uint64_t>(sv >> count), width);
  }
  if(count >= static_cast<std::uint64_t>(width))
    return 0;
  return tb >> count;
}

} // namespace

std::uint64_t eval_binary_bits(binary_op op, std::uint64_t a, std::uint64_t b, const typet &type)
{
  const int width = type->is_pointer() ? 64 : (type->is_bool() ? 1 : type->width);
  const bool sgn = type->is_signed();

  // pointer + integer adjusts the offset half only
  if(type->is_pointer() && (op == binary_op::ADD || op == binary_op::SUB))
  {
    std::uint32_t obj = pointer_obj(a);
    std::uint32_t off = static_cast<std::uint32_t>(a);
    std::uint32_t delta = static_cast<std::uint32_t>(b);
    std::uint32_t noff = op == binary_op::ADD ? off + delta : off - delta;
    return (static_cast<std::uint64_t>(obj) << 32) | noff;
  }

  switch(op)
  {
  case binary_op::ADD:
    return trunc_bits(a + b, width);
  case binary_op::SUB:
    return trunc_bits(a - b, width);
  case binary_op::MUL:
    return trunc_bits(a * b, width);
  case binary_op::DIV:
    if(sgn)
    {
      std::int64_t x = sext(a, width), y = sext(b, width);
      if(y == 0)
        return trunc_bits(static_cast<std::uint64_t>(x < 0 ? 1 : -1), width);
      if(y == -1) // INT_MIN / -1 wraps like bvsdiv
        return trunc_bits(static_cast<std::uint64_t>(std::uint64_t(0) - static_cast<std::uint64_t>(x)), width);
      return trunc_bits(static_cast<std::uint64_t>(x / y), width);
    }
    else
    {
      std::uint64_t x = trunc_bits(a, width), y = trunc_bits(b, width);
      if(y == 0)
        return trunc_bits(~std::uint64_t(0), width); // bvudiv x 0
      return x / y;
    }
  case binary_op::REM:
    if(sgn)
    {
      std::int64_t x = sext(a, width), y = sext(b, width);
      if(y == 0)
        return trunc_bits(static_cast<std::uint64_t>(x), width); // bvsrem x 0 = x
      if(y == -1)
        return 0;
      return trunc_bits(static_cast<std::uint64_t>(x % y), width);
    }
    else
    {
      std::uint64_t x = trunc_bits(a, width), y = trunc_bits(b, width);
      if(y == 0)
        return x; // bvurem x 0 = x
      return x % y;
    }
  case binary_op::SHL:
    return shift_left(a, trunc_bits(b, width), width);
  case binary_op::SHR:
    return shift_right(a, trunc_bits(b, width), type);
  case binary_op::BIT_AND:
    return trunc_bits(a & b, width);
  case binary_op::BIT_OR:
    return trunc_bits(a | b, width);
  case binary_op::BIT_XOR:
    return trunc_bits(a ^ b, width);
  case binary_op::LOG_AND:
    return (a != 0 && b != 0) ? 1 : 0;
  case binary_op::LOG_OR:
    return (a != 0 || b != 0) ? 1 : 0;
  case binary_op::EQ:
    return trunc_bits(a, width) == trunc_bits(b, width) ? 1 : 0;
  case binary_op::NE:
    return trunc_bits(a, width) != trunc_bits(b, width) ? 1 : 0;
  case binary_op::LT:
    return (sgn ? sext(a, width) < sext(b, width)
                : trunc_bits(a, width) < trunc_bits(b, width))
             ? 1
             : 0;
  case binary_op::LE:
    return (sgn ? sext(a, width) <= sext(b, width)
                : trunc_bits(a, width) <= trunc_bits(b, width))
             ? 1
             : 0;
  case binary_op::GT:
    return (sgn ? sext(a, width) > sext(b, width)
                : trunc_bits(a, width) > trunc_bits(b, width))
             ? 1
             : 0;
  case binary_op::GE:
    return (sgn ? sext(a, width) >= sext(b, width)
                : trunc_bits(a, width) >= trunc_bits(b, width))
             ? 1
             : 0;
  }
  return 0;
}

std::uint64_t eval_unary_bits(unary_op op, std::uint64_t a, const typet &type)
{
  const int width = type->is_bool() ? 1 : type->width;
  switch(op)
  {
  case unary_op::NEG:
    return trunc_bits(std::uint64_t(0) - a, width);
  case unary_op::LOG_NOT:
    return a == 0 ? 1 : 0;
  case unary_op::BIT_NOT:
    return trunc_bits(~a, width);
  }
  return 0;
}

bool no_signed_overflow(binary_op op, std::uint64_t a, std::uint64_t b, const typet &type)
{
  const int w = type->width;
  const std::int64_t x = sext(a, w), y = sext(b, w);
  const std::int64_t lo = w >= 64 ? INT64_MIN : -(std::int64_t(1) << (w - 1));
  const std::int64_t hi = w >= 64 ? INT64_MAX : (std::int64_t(1) << (w - 1)) - 1;

  switch(op)
  {
  case binary_op::ADD:
  {
    if(w < 64)
      return x + y >= lo && x + y <= hi;
    std::int64_t r;
    return !__builtin_add_overflow(x, y, &r);
  }
  case binary_op::SUB:
  {
    if(w < 64)
      return x - y >= lo && x - y <= hi;
    std::int64_t r;
    return !__builtin_sub_overflow(x, y, &r);
  }
  case binary_op::MUL:
  {
    if(w < 64)
    {
      __int128 r = static_cast<__int128>(x) * y;
      return r >= lo && r <= hi;
    }
    std::int64_t r;
    return !__builtin_mul_overflow(x, y, &r);
  }
  case binary_op::SHL:
  {
    std::uint64_t count = trunc_bits(b, w);
    if(count >= static_cast<std::uint64_t>(w))
      return false;
    if(x < 0)
      return false;
    // lossy if any shifted-out bit (including into the sign bit) is set
    std::int64_t limit = hi >> count;
    return x <= limit;
  }
  default:
    return true;
  }
}

} // namespace kbmc
