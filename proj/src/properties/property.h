/*******************************************************************\

Module: Safety property classes and configuration

\*******************************************************************/

#ifndef KBMC_PROPERTIES_PROPERTY_H
#define KBMC_PROPERTIES_PROPERTY_H

#include <string>

namespace kbmc
{

enum class property_class
{
  BUFFER_OVERFLOW,        // out-of-bounds array write
  IMPROPER_BUFFER_ACCESS, // out-of-bounds array read
  NULL_DEREF,
  DOUBLE_FREE,
  INVALID_POINTER,
  DIV_BY_ZERO,
  ARITH_OVERFLOW_ADD,
  ARITH_OVERFLOW_SUB,
  ARITH_OVERFLOW_MUL,
  ARITH_OVERFLOW_SHL,
  MEMORY_LEAK,
  USER_ASSERT,
  UNWINDING
};

const char *property_class_name(property_class pc);

/// Report string for a violated property. `detail` is the assertion
/// source text, the array name, or the leaked object label, depending
/// on the class. The exact strings are published in docs/violations.md.
std::string render_violation(property_class pc, const std::string &detail);

/// Which check families are instrumented. Mirrors the driver flags:
/// -m sets memory_leaks, -o sets overflow, -p clears pointer_checks.
struct property_config
{
  bool memory_leaks = false;
  bool overflow = false;
  bool pointer_checks = true;
  bool bounds_checks = true;
  bool div_by_zero = true;
  bool user_asserts = true; // always on

  bool class_enabled(property_class pc) const;
};

} // namespace kbmc

#endif
