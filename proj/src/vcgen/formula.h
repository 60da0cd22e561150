/*******************************************************************\

Module: Verification condition formulas

\*******************************************************************/

#ifndef KBMC_VCGEN_FORMULA_H
#define KBMC_VCGEN_FORMULA_H

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symex/ssa.h"

namespace kbmc
{

enum class formula_role
{
  B, // base case, Eq. 1: SAT iff a counterexample of length <= k exists
  F, // forward condition, Eq. 2: UNSAT iff the program terminates
  S  // inductive step, Eq. 3: UNSAT iff the property is inductive
};

/// The trace, linearized for the solver backends. DEFINE items are
/// functional equations in dependency order; CONSTRAIN items restrict
/// the space; VIOLATION items are the negated-claim disjuncts. A
/// formula is SAT iff some assignment of the free symbols satisfies
/// every DEFINE, every CONSTRAIN, and at least one VIOLATION whose
/// preceding CONSTRAINs hold (assumptions only guard claims that come
/// after them).
struct formula
{
  enum class item_kind
  {
    DEFINE,
    CONSTRAIN,
    VIOLATION
  };

  struct item
  {
    item_kind kind = item_kind::DEFINE;
    std::string lhs; // DEFINE
    exprt expr;      // DEFINE rhs / CONSTRAIN condition / VIOLATION condition
    std::size_t claim_step = 0; // VIOLATION: index into the source trace
  };

  formula_role role = formula_role::B;
  std::vector<item> items;
  std::map<std::string, typet> decls;
  std::set<std::string> free_symbols;
  std::map<std::string, std::vector<std::uint32_t>> pointer_domains;
  std::vector<ssa_object> objects;

  bool closed() const; // every symbol declared
};

/// model values: scalars or whole arrays
struct model_value
{
  bool is_array = false;
  std::uint64_t scalar = 0;
  std::vector<std::uint64_t> cells;
};

using modelt = std::map<std::string, model_value>;

enum class solver_status
{
  SAT,
  UNSAT,
  UNKNOWN
};

struct solver_verdict
{
  solver_status status = solver_status::UNKNOWN;
  std::string reason; // UNKNOWN: timeout | unsupported | budget | ...
  modelt model;       // present iff SAT
  std::optional<std::size_t> violated_claim; // VIOLATION item that fired
};

formula build_base_case(const ssa_trace &t);
formula build_forward_condition(const ssa_trace &t);
formula build_inductive_step(const ssa_trace &t);

} // namespace kbmc

#endif
