/*******************************************************************\

Module: Safety property instrumentation

\*******************************************************************/

#ifndef KBMC_PROPERTIES_INSTRUMENT_H
#define KBMC_PROPERTIES_INSTRUMENT_H

#include "frontend/goto_program.h"
#include "properties/property.h"

namespace kbmc
{

/// Insert ASSERT instructions in front of every dangerous operation:
/// division/modulo (DIV_BY_ZERO), array reads/writes (IMPROPER_BUFFER_
/// ACCESS / BUFFER_OVERFLOW), pointer dereferences (NULL_DEREF +
/// INVALID_POINTER), free (DOUBLE_FREE) and signed arithmetic
/// (ARITH_OVERFLOW_*). With cfg.memory_leaks the program is flagged to
/// claim, at END, that every frame-local allocation was released or
/// escaped. Jump targets are remapped so that loop heads re-check their
/// claims on every iteration.
goto_program instrument(const goto_program &gp, const property_config &cfg);

} // namespace kbmc

#endif
