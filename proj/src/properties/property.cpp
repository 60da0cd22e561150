#include "properties/property.h"

namespace kbmc
{

const char *property_class_name(property_class pc)
{
  switch(pc)
  {
  case property_class::BUFFER_OVERFLOW: return "BUFFER_OVERFLOW";
  case property_class::IMPROPER_BUFFER_ACCESS: return "IMPROPER_BUFFER_ACCESS";
  case property_class::NULL_DEREF: return "NULL_DEREF";
  case property_class::DOUBLE_FREE: return "DOUBLE_FREE";
  case property_class::INVALID_POINTER: return "INVALID_POINTER";
  case property_class::DIV_BY_ZERO: return "DIV_BY_ZERO";
  case property_class::ARITH_OVERFLOW_ADD: return "ARITH_OVERFLOW_ADD";
  case property_class::ARITH_OVERFLOW_SUB: return "ARITH_OVERFLOW_SUB";
  case property_class::ARITH_OVERFLOW_MUL: return "ARITH_OVERFLOW_MUL";
  case property_class::ARITH_OVERFLOW_SHL: return "ARITH_OVERFLOW_SHL";
  case property_class::MEMORY_LEAK: return "MEMORY_LEAK";
  case property_class::USER_ASSERT: return "USER_ASSERT";
  case property_class::UNWINDING: return "UNWINDING";
  }
  return "UNKNOWN";
}

// The report strings below are frozen in docs/violations.md; the report
// writer and the tests depend on them byte for byte.
std::string render_violation(property_class pc, const std::string &detail)
{
  switch(pc)
  {
  case property_class::BUFFER_OVERFLOW:
    return "array bounds violated: array '" + detail + "' upper bound";
  case property_class::IMPROPER_BUFFER_ACCESS:
    return "dereference failure: array bounds violated";
  case property_class::NULL_DEREF:
    return "dereference failure: NULL pointer";
  case property_class::DOUBLE_FREE:
    return "dereference failure: invalidated dynamic object";
  case property_class::INVALID_POINTER:
    return "dereference failure: invalid pointer";
  case property_class::DIV_BY_ZERO:
    return "division by zero";
  case property_class::ARITH_OVERFLOW_ADD:
    return "arithmetic overflow on add";
  case property_class::ARITH_OVERFLOW_SUB:
    return "arithmetic overflow on sub";
  case property_class::ARITH_OVERFLOW_MUL:
    return "arithmetic overflow on mul";
  case property_class::ARITH_OVERFLOW_SHL:
    return "arithmetic overflow on shl";
  case property_class::MEMORY_LEAK:
    return "dereference failure: forgotten memory: " + detail;
  case property_class::USER_ASSERT:
    return "assertion " + detail;
  case property_class::UNWINDING:
    return "unwinding assertion loop " + detail;
  }
  return "unknown violation";
}

bool property_config::class_enabled(property_class pc) const
{
  switch(pc)
  {
  case property_class::BUFFER_OVERFLOW:
  case property_class::IMPROPER_BUFFER_ACCESS:
    return bounds_checks;
  case property_class::NULL_DEREF:
  case property_class::DOUBLE_FREE:
  case property_class::INVALID_POINTER:
    return pointer_checks;
  case property_class::DIV_BY_ZERO:
    return div_by_zero;
  case property_class::ARITH_OVERFLOW_ADD:
  case property_class::ARITH_OVERFLOW_SUB:
  case property_class::ARITH_OVERFLOW_MUL:
  case property_class::ARITH_OVERFLOW_SHL:
    return overflow;
  case property_class::MEMORY_LEAK:
    return memory_leaks;
  case property_class::USER_ASSERT:
    return user_asserts;
  case property_class::UNWINDING:
    return true;
  }
  return true;
}

} // namespace kbmc
