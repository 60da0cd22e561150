/*******************************************************************\

Module: External SMT solver backend

\*******************************************************************/

#ifndef KBMC_VCGEN_SMT_SOLVER_H
#define KBMC_VCGEN_SMT_SOLVER_H

#include <string>

#include "vcgen/formula.h"

namespace kbmc
{

/// Render the formula as an SMT-LIB v2 script (QF_AUFBV): declarations
/// for the free symbols, defining equations for the rest, the
/// assumption-prefix chain, and the violation disjunction as the goal.
std::string encode_smtlib(const formula &f);

struct smt_options
{
  std::string solver_path; // binary speaking SMT-LIB v2 on stdin/stdout
  double timeout_seconds = 0; // 0: none
};

/// Run the child solver on the encoded formula and decode its model.
/// Throws backend_unavailable when the binary cannot be started.
solver_verdict solve_with_smt(const formula &f, const smt_options &opts);

} // namespace kbmc

#endif
