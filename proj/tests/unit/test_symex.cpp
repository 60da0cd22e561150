/*******************************************************************\

Module: Symbolic execution tests

\*******************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.h"
#include "symex/dump.h"
#include "symex/propagate.h"
#include "symex/slice.h"
#include "symex/unroll.h"
#include "util/errors.h"
#include "vcgen/enumerator.h"

using namespace kbmc;
using namespace kbmc::test;

namespace
{

solver_verdict quick_solve(const formula &f)
{
  return solve_with_enumerator(f);
}

// SSA well-formedness: no symbol is read before it is defined or
// declared free, walking the steps in order
bool ssa_well_formed(const ssa_trace &t)
{
  std::set<std::string> known = t.free_symbols;
  auto check = [&](const exprt &e, auto &&self) -> bool {
    if(!e)
      return true;
    if(e->kind == expr_kind::SYMBOL && !known.count(e->symbol))
      return false;
    for(const auto &a : e->args)
      if(!self(a, self))
        return false;
    return true;
  };
  for(const auto &st : t.steps)
  {
    if(!check(st.guard, check) || !check(st.rhs, check) || !check(st.cond, check))
      return false;
    if(st.kind == ssa_step_kind::ASSIGNMENT)
      known.insert(st.lhs);
  }
  return true;
}

} // namespace

TEST_CASE("base-case unroll of an exhausted loop leaves the claim implied")
{
  // oracle: the concrete interpreter runs the loop exactly twice and
  // finishes cleanly
  harness h("int f() { int i = 0; while(i < 2) { i = i + 1; } assert(i == 2); return i; }", "f");
  auto concrete = run_concrete(h);
  REQUIRE(concrete.status == interp_status::FINISHED);
  REQUIRE(concrete.max_depth_seen == 2);

  ssa_trace t = make_trace(h.ctx, 2, symex_mode::BASE_CASE);
  CHECK(ssa_well_formed(t));
  auto v = quick_solve(build_base_case(t));
  CHECK(v.status == solver_status::UNSAT);
}

TEST_CASE("forward condition is falsifiable below the termination depth")
{
  harness h("int f() { int i = 0; while(i < 2) { i = i + 1; } assert(i == 2); return i; }", "f");

  ssa_trace t1 = make_trace(h.ctx, 1, symex_mode::FORWARD_CONDITION);
  REQUIRE(t1.unwinding_claim_steps.size() == 1); // one per loop head
  auto v1 = quick_solve(build_forward_condition(t1));
  CHECK(v1.status == solver_status::SAT); // a second iteration exists

  ssa_trace t2 = make_trace(h.ctx, 2, symex_mode::FORWARD_CONDITION);
  auto v2 = quick_solve(build_forward_condition(t2));
  CHECK(v2.status == solver_status::UNSAT); // terminated within 2
}

TEST_CASE("loop-free programs unroll identically for every bound")
{
  harness h("int g(int a) { int b = a + 1; assert(b != 0 || b == 0); return b; }", "g");
  ssa_trace t1 = make_trace(h.ctx, 1, symex_mode::BASE_CASE, false);
  ssa_trace t3 = make_trace(h.ctx, 3, symex_mode::BASE_CASE, false);
  // identical steps; only the header records the bound
  std::string d1 = dump_trace(t1), d3 = dump_trace(t3);
  CHECK(d1.substr(d1.find('\n')) == d3.substr(d3.find('\n')));
}

TEST_CASE("constant propagation folds and preserves verdicts")
{
  harness h(
    "int f() { int x = 2 + 3; int y = x * 2; assert(x < 10); assert(y == 10); return y; }",
    "f");
  ssa_trace raw = make_trace(h.ctx, 1, symex_mode::BASE_CASE, false);
  ssa_trace folded = constant_propagate(raw);

  // 2+3 folds to 5 in the defining assignment of x
  bool found_const_5 = false;
  for(const auto &st : folded.steps)
    if(st.kind == ssa_step_kind::ASSIGNMENT && st.display == "x")
      found_const_5 = is_constant(st.rhs) && st.rhs->bits == 5;
  CHECK(found_const_5);

  // the claim x < 10 becomes the constant true
  bool claim_true = false;
  for(const auto &st : folded.steps)
    if(st.kind == ssa_step_kind::CLAIM && st.source_line == 1 && is_true(st.cond))
      claim_true = true;
  CHECK(claim_true);

  auto v_raw = quick_solve(build_base_case(raw));
  auto v_folded = quick_solve(build_base_case(folded));
  CHECK(v_raw.status == v_folded.status);
  CHECK(v_raw.status == solver_status::UNSAT);
}

TEST_CASE("propagation is a fixpoint on traces without constants")
{
  harness h("int f(int a) { int b = a + 1; assert(b != 7); return b; }", "f");
  ssa_trace raw = make_trace(h.ctx, 1, symex_mode::BASE_CASE, false);
  ssa_trace folded = constant_propagate(raw);
  CHECK(dump_trace(raw) == dump_trace(folded));
}

TEST_CASE("slicing drops steps after the last claim")
{
  harness h(
    "int f(int a) { int b = a + 1; assert(b != 0); int c = b * 3; return c; }",
    "f");
  ssa_trace raw = make_trace(h.ctx, 1, symex_mode::BASE_CASE, false);
  ssa_trace sliced = slice(raw);
  CHECK(sliced.step_count() < raw.step_count());
  // c is defined after the only claim; it must be gone
  for(const auto &st : sliced.steps)
    CHECK(st.display != "c");
}

TEST_CASE("slicing removes independent assignment chains")
{
  harness h(
    "int f(int a, int b) {\n"
    "  int x = a + 1;\n"
    "  int y = b + 2;\n"
    "  int z = y * y;\n"
    "  int w = x - 1;\n"
    "  assert(w < 1000000);\n" // touches only the x-chain
    "  return z;\n"
    "}\n",
    "f");
  ssa_trace raw = make_trace(h.ctx, 2, symex_mode::BASE_CASE, false);
  ssa_trace sliced = slice(raw);
  for(const auto &st : sliced.steps)
  {
    CHECK(st.display != "y");
    CHECK(st.display != "z");
  }
  // oracle: the solver verdicts agree
  auto v_raw = quick_solve(build_base_case(raw));
  auto v_sliced = quick_solve(build_base_case(sliced));
  CHECK(v_raw.status == v_sliced.status);
}

TEST_CASE("slicing a claim-free trace yields an empty step list")
{
  property_config no_checks;
  no_checks.div_by_zero = false;
  no_checks.pointer_checks = false;
  no_checks.bounds_checks = false;
  harness h("int f(int a) { int b = a + 1; return b; }", "f", no_checks);
  ssa_trace raw = make_trace(h.ctx, 1, symex_mode::BASE_CASE, false);
  ssa_trace sliced = slice(raw);
  CHECK(sliced.steps.empty());
}

TEST_CASE("inductive-step mode havocs the loop-modified variables")
{
  harness h(
    "void f(unsigned n) { unsigned i = 0; while(i < n) { i = i + 1; assert(i <= n); } }",
    "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::INDUCTIVE_STEP, false);
  // havocked must cover every loop-modified variable, versioned at entry
  bool i_havocked = false;
  for(const auto &sym : t.havocked)
    if(sym.rfind("i#", 0) == 0)
      i_havocked = true;
  CHECK(i_havocked);
  CHECK(ssa_well_formed(t));
}

TEST_CASE("unroll overflow reports resource exhaustion")
{
  harness h(
    "void f(int n) { for(int i=0;i<n;i++) { for(int j=0;j<n;j++) { for(int l=0;l<n;l++) { n = n; } } } }",
    "f");
  h.ctx.cfg.step_budget = 500;
  CHECK_THROWS_AS(
    make_trace(h.ctx, 20, symex_mode::BASE_CASE, false), unwind_overflow);
}

TEST_CASE("base-case unwinding cut: deeper bugs stay invisible")
{
  // bug fires at the third loop iteration
  std::string src =
    "void f() { int i = 0; while(i < 5) { i = i + 1; assert(i != 3); } }";
  harness h(src, "f");

  // oracle: concrete execution hits the violation at depth 3
  auto concrete = run_concrete(h);
  REQUIRE(concrete.status == interp_status::VIOLATION);
  REQUIRE(concrete.violation->depth == 3);

  ssa_trace t2 = make_trace(h.ctx, 2, symex_mode::BASE_CASE);
  CHECK(quick_solve(build_base_case(t2)).status == solver_status::UNSAT);

  ssa_trace t3 = make_trace(h.ctx, 3, symex_mode::BASE_CASE);
  auto v3 = quick_solve(build_base_case(t3));
  CHECK(v3.status == solver_status::SAT);
}

TEST_CASE("base-case monotonicity: SAT stays SAT for larger bounds")
{
  std::string src =
    "void f() { int i = 0; while(i < 5) { i = i + 1; assert(i != 3); } }";
  harness h(src, "f");
  for(int k = 3; k <= 6; k++)
  {
    ssa_trace t = make_trace(h.ctx, k, symex_mode::BASE_CASE);
    CHECK(quick_solve(build_base_case(t)).status == solver_status::SAT);
  }
}

TEST_CASE("nested loops unroll with per-entry iteration counters")
{
  std::string src =
    "int f() {\n"
    "  int total = 0;\n"
    "  for(int i = 0; i < 2; i++)\n"
    "    for(int j = 0; j < 2; j++)\n"
    "      total = total + 1;\n"
    "  assert(total == 4);\n"
    "  return total;\n"
    "}\n";
  harness h(src, "f");
  auto concrete = run_concrete(h);
  REQUIRE(concrete.status == interp_status::FINISHED);

  ssa_trace t = make_trace(h.ctx, 2, symex_mode::BASE_CASE);
  CHECK(quick_solve(build_base_case(t)).status == solver_status::UNSAT);
}

TEST_CASE("function calls are inlined with separate namespaces")
{
  std::string src =
    "int sq(int v) { return v * v; }\n"
    "int f() { int a = sq(3); int b = sq(4); assert(a + b == 25); return a; }\n";
  harness h(src, "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  CHECK(quick_solve(build_base_case(t)).status == solver_status::UNSAT);
}

TEST_CASE("recursion unrolls up to the bound and is cut beyond it")
{
  std::string src =
    "int fact(int n) { if(n <= 1) return 1; return n * fact(n - 1); }\n"
    "void f() { int r = fact(3); assert(r == 6); }\n";
  harness h(src, "f");
  // fact(3) needs three frames; at k=3 the result is exact
  ssa_trace t3 = make_trace(h.ctx, 3, symex_mode::BASE_CASE);
  CHECK(quick_solve(build_base_case(t3)).status == solver_status::UNSAT);
  // at k=1 the recursive path is cut, so no violation is reachable either
  ssa_trace t1 = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  CHECK(quick_solve(build_base_case(t1)).status == solver_status::UNSAT);
}

TEST_CASE("ssa dump format is stable")
{
  harness h("int f() { int x = 1; assert(x == 1); return x; }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE, false);
  std::string text = dump_trace(t);
  CHECK(text.find("mode base-case k 1") == 0);
  CHECK(text.find("ASSIGN x#2 := 1") != std::string::npos);
  CHECK(text.find("CLAIM [USER_ASSERT line 1] (x#2 == 1)") != std::string::npos);
}

TEST_CASE("well-formedness holds across modes and bounds")
{
  std::string src =
    "int f(unsigned char n) {\n"
    "  int acc = 0;\n"
    "  for(int i = 0; i < n; i++) acc = acc + 2;\n"
    "  assert(acc >= 0);\n"
    "  return acc;\n"
    "}\n";
  harness h(src, "f");
  for(int k = 1; k <= 3; k++)
    for(auto mode : {symex_mode::BASE_CASE, symex_mode::FORWARD_CONDITION,
                     symex_mode::INDUCTIVE_STEP})
    {
      ssa_trace raw = make_trace(h.ctx, k, mode, false);
      CHECK(ssa_well_formed(raw));
      ssa_trace opt = slice(constant_propagate(raw));
      CHECK(ssa_well_formed(opt));
    }
}
