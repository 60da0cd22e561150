/*******************************************************************\

Module: Bit-precise scalar arithmetic

\*******************************************************************/

// One evaluation semantics for every concrete execution path in the
// tool: the GOTO interpreter, the enumerator backend, and the constant
// folder all call into these helpers. Partial operations are totalized
// the same way SMT-LIB totalizes them (bvudiv x 0 = all-ones, bvsdiv
// x 0 = x<0 ? 1 : -1, bvsrem x 0 = x, shifts >= width saturate), so a
// formula model and a concrete replay can never disagree.

#ifndef KBMC_UTIL_ARITH_H
#define KBMC_UTIL_ARITH_H

#include <cstdint>

#include "util/expr.h"
#include "util/types.h"

namespace kbmc
{

/// Truncate to `width` bits.
std::uint64_t trunc_bits(std::uint64_t bits, int width);

/// Sign-extend a `width`-bit pattern to a signed 64-bit value.
std::int64_t sext(std::uint64_t bits, int width);

/// Interpret bits as the numeric value of the given type (signed types
/// sign-extend; everything else zero-extends).
std::int64_t bits_to_signed(std::uint64_t bits, const typet &t);

/// Convert a bit pattern between scalar types (C-style truncation /
/// extension; bool collapses to 0/1).
std::uint64_t convert_bits(std::uint64_t bits, const typet &from, const typet &to);

/// Evaluate a binary operator on raw bit patterns. `type` is the
/// unified operand type (callers convert operands first); the result is
/// in the operator's result type (bool for comparisons, `type` else).
std::uint64_t eval_binary_bits(binary_op op, std::uint64_t a, std::uint64_t b, const typet &type);

std::uint64_t eval_unary_bits(unary_op op, std::uint64_t a, const typet &type);

/// Overflow predicates for signed ADD/SUB/MUL/SHL at the operand width.
/// Returns true when the operation does NOT overflow.
bool no_signed_overflow(binary_op op, std::uint64_t a, std::uint64_t b, const typet &type);

} // namespace kbmc

#endif
