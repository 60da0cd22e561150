/*******************************************************************\

Module: Counterexamples

\*******************************************************************/

#ifndef KBMC_VCGEN_COUNTEREXAMPLE_H
#define KBMC_VCGEN_COUNTEREXAMPLE_H

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "properties/property.h"

namespace kbmc
{

struct cex_state
{
  std::string file;
  int line = 0;
  std::string function;
  std::map<std::string, std::string> assignments; // variable -> value text
};

struct cex_violation
{
  property_class property = property_class::USER_ASSERT;
  int line = 0;
  std::string function;
  std::string file;
  std::string rendered; // the report string
  std::string detail;
};

/// A decoded model: the executed states in order, the first violated
/// claim, and the nondet substitution map that lets the replay
/// interpreter re-drive the program down the same path.
struct counterexample
{
  std::vector<cex_state> states;
  cex_violation violated;
  int depth = 1; // the unwind bound of the trace

  std::map<std::string, std::uint64_t> nondet_values; // replay key -> bits

  // replay needs to rebuild the same instrumented program
  std::string source_file;
  std::string function;
  struct
  {
    bool memory_leaks = false;
    bool overflow = false;
    bool pointer_checks = true;
    bool bounds_checks = true;
    bool div_by_zero = true;
  } checks;

  std::string to_json() const;
  static counterexample from_json(const std::string &text);

  /// Plain-text rendering in the model checker's log style.
  std::string to_text() const;
};

} // namespace kbmc

#endif
