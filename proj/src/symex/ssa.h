/*******************************************************************\

Module: SSA traces

\*******************************************************************/

#ifndef KBMC_SYMEX_SSA_H
#define KBMC_SYMEX_SSA_H

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "frontend/goto_program.h"
#include "properties/property.h"

namespace kbmc
{

enum class symex_mode
{
  BASE_CASE,
  FORWARD_CONDITION,
  INDUCTIVE_STEP
};

const char *symex_mode_name(symex_mode m);

enum class ssa_step_kind
{
  ASSIGNMENT,
  ASSUMPTION,
  CLAIM
};

/// One step of the unrolled single-assignment program. Assignments are
/// unconditional defining equations (merges introduce ite-phis); the
/// guard records the path condition under which the step executes,
/// which assumptions and claims are relative to.
struct ssa_step
{
  ssa_step_kind kind = ssa_step_kind::ASSIGNMENT;
  exprt guard; // boolean, over SSA symbols

  // ASSIGNMENT
  std::string lhs; // SSA symbol name
  typet lhs_type;
  exprt rhs;

  // ASSUMPTION / CLAIM
  exprt cond;
  property_class property = property_class::USER_ASSERT;
  std::string detail;

  int source_line = 0;
  std::string function;
  std::string file;
  std::string display; // source-level variable name, empty for internal

  bool unwinding = false;   // unwinding claim (loop or recursion frontier)
  std::string loop_id;      // static loop identity for unwinding claims
};

/// Heap object minted during unrolling. The 32-bit key is the hash of
/// the dynamic context key, identical to the one concrete replay mints
/// for the same allocation event.
struct ssa_object
{
  std::uint32_t key = 0;
  std::string ctx_key;
  std::string label; // dynamic_<n>_array
  typet elem_type;
  std::vector<typet> field_types;
  std::int64_t count_const = -1; // -1 when not a compile-time constant
  std::string count_symbol;      // SSA symbol holding the element count
  bool param = false;
  int alloc_line = 0;
  std::string owner; // function-instance prefix that allocated it
};

/// A havoc/declaration of a source-level variable; lets the decoder
/// show input values as counterexample states.
struct free_event
{
  std::string symbol;  // SSA name
  std::string display; // source-level name
  int source_line = 0;
  std::string function;
  std::string file;
  std::size_t at_step = 0; // position in the step list
};

struct ssa_trace
{
  std::vector<ssa_step> steps;
  std::vector<free_event> free_events;
  int unwind_bound = 1;
  symex_mode mode = symex_mode::BASE_CASE;

  std::map<std::string, typet> decls;      // every SSA symbol
  std::set<std::string> free_symbols;      // symbols without a defining step
  std::map<std::string, std::string> nondet_keys; // free symbol -> replay key
  std::map<std::string, std::vector<std::uint32_t>> pointer_domains;
  std::vector<ssa_object> objects;
  std::set<std::string> havocked;          // inductive-step havoc symbols
  std::vector<std::size_t> unwinding_claim_steps;
  bool recursion_frontier_hit = false;

  std::size_t step_count() const { return steps.size(); }
};

struct unroll_options
{
  bool unwinding_claims = false; // claim (rather than cut) exhausted loops
  std::int64_t step_budget = 1'000'000;
  const class deadline *timeout = nullptr;
};

/// Simple wall-clock deadline, checked cooperatively.
class deadline
{
public:
  deadline() = default;
  static deadline after_seconds(double s);
  bool expired() const;
  bool armed() const { return armed_; }

private:
  bool armed_ = false;
  std::int64_t end_ns_ = 0;
};

} // namespace kbmc

#endif
