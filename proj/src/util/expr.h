/*******************************************************************\

Module: Expression trees shared by the AST, GOTO and SSA layers

\*******************************************************************/

#ifndef KBMC_UTIL_EXPR_H
#define KBMC_UTIL_EXPR_H

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "util/types.h"

namespace kbmc
{

enum class expr_kind
{
  CONSTANT,   // value in `bits`, typed
  SYMBOL,     // named variable; versioned name at SSA level
  UNARY,      // op in `op`
  BINARY,     // op in `op`
  ITE,        // args[0] ? args[1] : args[2]
  CAST,       // value conversion to `type`
  INDEX,      // args[0][args[1]]  (named array read)
  STORE,      // args[0] with [args[1]] := args[2]  (array update value)
  DEREF,      // *(args[0]) or args[0]->field  (heap cell read)
  PTR_OBJ,    // object id of a pointer value (u32)
  PTR_OFF,    // element offset of a pointer value (i32)
  VALID_DEREF, // pointer safe to dereference (live, in bounds, type ok)
  CAN_FREE,   // pointer NULL or freeable (live object at offset 0)
  LIVE_OBJ,   // object with given key is still allocated (bool)
  NO_OVERFLOW // signed op on args does not overflow (op in `op`)
};

enum class unary_op
{
  NEG,
  LOG_NOT,
  BIT_NOT
};

enum class binary_op
{
  ADD,
  SUB,
  MUL,
  DIV,
  REM,
  SHL,
  SHR,
  BIT_AND,
  BIT_OR,
  BIT_XOR,
  LOG_AND,
  LOG_OR,
  EQ,
  NE,
  LT,
  LE,
  GT,
  GE
};

struct expr_node;
using exprt = std::shared_ptr<const expr_node>;

struct expr_node
{
  expr_kind kind = expr_kind::CONSTANT;
  typet type;

  std::uint64_t bits = 0;    // CONSTANT payload (two's complement bits)
  std::string symbol;        // SYMBOL name
  unary_op uop = unary_op::NEG;
  binary_op bop = binary_op::ADD;
  int field = -1;            // DEREF: struct field index, -1 for scalar cell
  std::uint32_t object_key = 0; // LIVE_OBJ
  std::vector<exprt> args;
};

// Pointer values are packed into 64 bits: object key in the high half,
// signed element offset in the low half. Key 0 is NULL.
constexpr std::uint32_t OBJ_NULL = 0;
constexpr std::uint32_t OBJ_INVALID = 0xFFFFFFFFu;

inline std::uint64_t make_pointer_bits(std::uint32_t obj, std::int32_t off)
{
  return (static_cast<std::uint64_t>(obj) << 32) |
         (static_cast<std::uint64_t>(static_cast<std::uint32_t>(off)));
}
inline std::uint32_t pointer_obj(std::uint64_t bits)
{
  return static_cast<std::uint32_t>(bits >> 32);
}
inline std::int32_t pointer_off(std::uint64_t bits)
{
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(bits));
}

namespace ex
{
exprt constant(std::uint64_t bits, typet type);
exprt int_const(std::int64_t value, typet type);
exprt bool_const(bool value);
exprt null_pointer(typet pointer_type);
exprt symbol(const std::string &name, typet type);
exprt unary(unary_op op, exprt a);
exprt binary(binary_op op, exprt a, exprt b, typet type);
exprt ite(exprt cond, exprt then_e, exprt else_e);
exprt cast(exprt a, typet to);
exprt index(exprt array, exprt idx);
exprt store(exprt array, exprt idx, exprt value);
exprt deref(exprt pointer, int field, typet cell_type);
exprt ptr_obj(exprt pointer);
exprt ptr_off(exprt pointer);
exprt valid_deref(exprt pointer);
exprt can_free(exprt pointer);
exprt live_obj(std::uint32_t key);
exprt no_overflow(binary_op op, exprt a, exprt b);

exprt not_(exprt a);
exprt and_(exprt a, exprt b);
exprt or_(exprt a, exprt b);
exprt eq(exprt a, exprt b);
} // namespace ex

bool is_true(const exprt &e);
bool expr_equal(const exprt &a, const exprt &b);
bool is_false(const exprt &e);
bool is_constant(const exprt &e);

/// Stable textual rendering used by --dump-ssa and for debugging.
std::string expr_to_string(const exprt &e);

} // namespace kbmc

#endif
