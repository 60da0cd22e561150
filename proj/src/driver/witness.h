/*******************************************************************\

Module: Violation witness export

\*******************************************************************/

#ifndef KBMC_DRIVER_WITNESS_H
#define KBMC_DRIVER_WITNESS_H

#include <string>

#include "vcgen/counterexample.h"

namespace kbmc
{

/// XML graph rendering of a counterexample: one node per state plus the
/// flagged entry node; the last node is flagged as the violation node.
/// Edges carry startline, assumption text and the enclosing function.
/// The schema is documented in docs/witness.md and contains nothing
/// run-dependent, so two runs of the same verification produce
/// byte-identical witnesses.
std::string render_witness(const counterexample &cex);

void write_witness(const counterexample &cex, const std::string &path);

} // namespace kbmc

#endif
