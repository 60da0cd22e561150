#ifndef KBMC_TESTS_HELPERS_H
#define KBMC_TESTS_HELPERS_H

#include <string>

#include "frontend/lowering.h"
#include "frontend/parser.h"
#include "kinduction/engine.h"
#include "properties/instrument.h"
#include "replay/interpreter.h"

namespace kbmc::test
{

inline goto_model compile(const std::string &src)
{
  auto unit = parse_string(src);
  return lower_unit(unit);
}

struct harness
{
  goto_model prepared;
  step_context ctx;

  harness(const std::string &src, const std::string &entry,
          property_config checks = {}, engine_config cfg = {})
  {
    prepared = prepare_model(compile(src), entry, checks);
    ctx.model = &prepared;
    ctx.entry = entry;
    ctx.checks = checks;
    ctx.cfg = cfg;
  }
};

/// deterministic concrete run (all nondet values zero)
inline interp_result run_concrete(const harness &h)
{
  zero_nondet_source zeros;
  return interpret(h.prepared, h.ctx.entry, zeros);
}

} // namespace kbmc::test

#endif
