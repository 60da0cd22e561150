/*******************************************************************\

Module: VC generation and solver backend tests

\*******************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/stat.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>

#include "helpers.h"
#include "symex/unroll.h"
#include "util/errors.h"
#include "vcgen/decode.h"
#include "vcgen/enumerator.h"
#include "vcgen/smt_solver.h"

using namespace kbmc;
using namespace kbmc::test;

TEST_CASE("assert(false) is satisfiable at k=1")
{
  harness h("void f() { assert(false); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  auto v = solve_with_enumerator(build_base_case(t));
  CHECK(v.status == solver_status::SAT);
}

TEST_CASE("assert(true) is unsatisfiable")
{
  harness h("void f() { assert(true); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  auto v = solve_with_enumerator(build_base_case(t));
  CHECK(v.status == solver_status::UNSAT);
}

TEST_CASE("base case finds the model at the claim point")
{
  // oracle: concretely, the loop body asserts i != 3 and the third
  // iteration violates it with i == 3
  std::string src = "void f() { int i = 0; while(i < 5) { i = i + 1; assert(i != 3); } }";
  harness h(src, "f");
  auto concrete = run_concrete(h);
  REQUIRE(concrete.status == interp_status::VIOLATION);
  REQUIRE(concrete.violation->depth == 3);

  ssa_trace t = make_trace(h.ctx, 3, symex_mode::BASE_CASE);
  formula f = build_base_case(t);
  CHECK(f.closed());
  auto v = solve_with_enumerator(f);
  REQUIRE(v.status == solver_status::SAT);

  counterexample cex = decode_counterexample(t, v);
  CHECK(cex.violated.property == property_class::USER_ASSERT);
  CHECK(cex.violated.rendered == "assertion i != 3");
  CHECK(cex.violated.line == 1);
  CHECK(cex.depth == 3);
}

TEST_CASE("forward condition termination verdicts")
{
  std::string src = "void f() { int i = 0; while(i < 2) { i = i + 1; } }";
  harness h(src, "f");
  // oracle: terminates in exactly 2 iterations
  auto concrete = run_concrete(h);
  REQUIRE(concrete.status == interp_status::FINISHED);
  REQUIRE(concrete.max_depth_seen == 2);

  auto at = [&](int k) {
    ssa_trace t = make_trace(h.ctx, k, symex_mode::FORWARD_CONDITION);
    return solve_with_enumerator(build_forward_condition(t)).status;
  };
  CHECK(at(2) == solver_status::UNSAT); // terminated
  CHECK(at(1) == solver_status::SAT);   // a further iteration exists

  harness loop_free("void g() { int x = 1; x = x + 1; }", "g");
  ssa_trace t = make_trace(loop_free.ctx, 1, symex_mode::FORWARD_CONDITION);
  CHECK(solve_with_enumerator(build_forward_condition(t)).status == solver_status::UNSAT);
}

TEST_CASE("inductive step proves an invariant from the havocked state")
{
  // i > 0 is 1-inductive: i>0 and i' = i+1 imply i' > 0 (the in-loop
  // assumption discharges wraparound)
  std::string src =
    "void f() {\n"
    "  signed char i = 1;\n"
    "  while(nondet_bool()) { i = i + 1; assume(i > 0); }\n"
    "  assert(i > 0);\n"
    "}\n";
  harness h(src, "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::INDUCTIVE_STEP);
  auto v = solve_with_enumerator(build_inductive_step(t));
  CHECK(v.status == solver_status::UNSAT);
}

TEST_CASE("non-inductive properties come back satisfiable")
{
  std::string src =
    "void f() {\n"
    "  signed char i = 0;\n"
    "  while(nondet_bool()) { i = i + 1; assert(i < 10); }\n"
    "}\n";
  harness h(src, "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::INDUCTIVE_STEP);
  auto v = solve_with_enumerator(build_inductive_step(t));
  // havocking i to 9 violates after one step
  CHECK(v.status == solver_status::SAT);
}

TEST_CASE("loop-free inductive step keeps tautological claims unsatisfiable")
{
  harness h("void f(int a) { assert(a == a); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::INDUCTIVE_STEP);
  CHECK(t.havocked.empty());
  auto v = solve_with_enumerator(build_inductive_step(t));
  CHECK(v.status == solver_status::UNSAT);
}

TEST_CASE("enumerator finds models in small bitvector ranges")
{
  // x: uint8 with x > 250 and x < 260 (compared at 16 bits) — the
  // models are exactly 251..255 and the search returns the smallest
  formula f;
  f.role = formula_role::B;
  f.decls["x"] = ty::uint(8);
  f.free_symbols.insert("x");
  exprt x = ex::symbol("x", ty::uint(8));
  exprt wide = ex::cast(x, ty::uint(16));
  exprt cond = ex::and_(
    ex::binary(binary_op::GT, wide, ex::int_const(250, ty::uint(16)), ty::boolean()),
    ex::binary(binary_op::LT, wide, ex::int_const(260, ty::uint(16)), ty::boolean()));
  formula::item viol;
  viol.kind = formula::item_kind::VIOLATION;
  viol.expr = cond;
  f.items.push_back(viol);

  auto v = solve_with_enumerator(f);
  REQUIRE(v.status == solver_status::SAT);
  CHECK(v.model.at("x").scalar == 251);
}

TEST_CASE("x != x is unsatisfiable")
{
  formula f;
  f.role = formula_role::B;
  f.decls["x"] = ty::uint(8);
  f.free_symbols.insert("x");
  exprt x = ex::symbol("x", ty::uint(8));
  formula::item viol;
  viol.kind = formula::item_kind::VIOLATION;
  viol.expr = ex::binary(binary_op::NE, x, x, ty::boolean());
  f.items.push_back(viol);
  CHECK(solve_with_enumerator(f).status == solver_status::UNSAT);
}

TEST_CASE("enumerator honors deadlines with UNKNOWN(timeout)")
{
  // three 8-bit inputs, unsatisfiable goal: the full 2^24 sweep cannot
  // finish in a millisecond
  formula f;
  f.role = formula_role::B;
  for(const auto name : {"a", "b", "c"})
  {
    f.decls[name] = ty::uint(8);
    f.free_symbols.insert(name);
  }
  exprt sum = ex::binary(
    binary_op::ADD,
    ex::cast(ex::symbol("a", ty::uint(8)), ty::uint(32)),
    ex::binary(
      binary_op::MUL,
      ex::cast(ex::symbol("b", ty::uint(8)), ty::uint(32)),
      ex::cast(ex::symbol("c", ty::uint(8)), ty::uint(32)),
      ty::uint(32)),
    ty::uint(32));
  formula::item viol;
  viol.kind = formula::item_kind::VIOLATION;
  viol.expr =
    ex::binary(binary_op::GT, sum, ex::int_const(0x10000000, ty::uint(32)), ty::boolean());
  f.items.push_back(viol);

  deadline dl = deadline::after_seconds(0.001);
  enum_options opts;
  opts.timeout = &dl;
  auto v = solve_with_enumerator(f, opts);
  CHECK(v.status == solver_status::UNKNOWN);
  CHECK(v.reason.find("timeout") != std::string::npos);
}

TEST_CASE("free symbols wider than the budget yield UNKNOWN")
{
  harness h("void f(unsigned long x) { assert(x != 77); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  auto v = solve_with_enumerator(build_base_case(t));
  CHECK(v.status == solver_status::UNKNOWN);
  CHECK(v.reason.find("too wide") != std::string::npos);
}

TEST_CASE("decoding picks the earliest violated claim")
{
  std::string src =
    "void f(unsigned char x) {\n"
    "  assume(x == 1);\n"
    "  assert(x != 1);\n"  // violated first in step order
    "  assert(x > 100);\n" // also violated by the same model
    "}\n";
  harness h(src, "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  auto v = solve_with_enumerator(build_base_case(t));
  REQUIRE(v.status == solver_status::SAT);
  counterexample cex = decode_counterexample(t, v);
  CHECK(cex.violated.line == 3);
  CHECK(cex.violated.rendered == "assertion x != 1");
}

TEST_CASE("division-by-zero model decodes to the zero divisor")
{
  harness h("int f(unsigned char z) { return 10 / z; }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  auto v = solve_with_enumerator(build_base_case(t));
  REQUIRE(v.status == solver_status::SAT);
  counterexample cex = decode_counterexample(t, v);
  CHECK(cex.violated.property == property_class::DIV_BY_ZERO);
  CHECK(cex.violated.rendered == "division by zero");
  bool z_is_zero = false;
  for(const auto &st : cex.states)
  {
    auto it = st.assignments.find("z");
    if(it != st.assignments.end() && it->second == "0")
      z_is_zero = true;
  }
  CHECK(z_is_zero);
}

TEST_CASE("counterexamples survive a JSON round trip")
{
  harness h("void f(unsigned char x) { assert(x < 200); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  auto v = solve_with_enumerator(build_base_case(t));
  REQUIRE(v.status == solver_status::SAT);
  counterexample cex = decode_counterexample(t, v);
  cex.source_file = "x.c";
  cex.function = "f";
  counterexample back = counterexample::from_json(cex.to_json());
  CHECK(back.violated.rendered == cex.violated.rendered);
  CHECK(back.violated.line == cex.violated.line);
  CHECK(back.nondet_values == cex.nondet_values);
  CHECK(back.states.size() == cex.states.size());
  CHECK(back.function == "f");
}

TEST_CASE("formula role preconditions are enforced")
{
  harness h("void f() { assert(true); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  CHECK_THROWS_AS(build_forward_condition(t), encoding_error);
  CHECK_THROWS_AS(build_inductive_step(t), encoding_error);
}

// ---- external SMT backend ----

namespace
{

// a scripted stand-in for a real solver: enough SMT-LIB to test the
// process protocol (answer + model values)
std::string make_fake_solver(const std::string &answer, const std::string &value_line)
{
  std::string path = "/tmp/kbmc_fake_solver_" + std::to_string(getpid()) + "_" +
                     answer + ".sh";
  std::ofstream out(path);
  out << "#!/bin/sh\n"
      << "while read -r line; do\n"
      << "  case \"$line\" in\n"
      << "    *check-sat*) echo '" << answer << "' ;;\n"
      << "    *get-value*) echo '" << value_line << "' ;;\n"
      << "    *exit*) exit 0 ;;\n"
      << "  esac\n"
      << "done\n";
  out.close();
  chmod(path.c_str(), 0755);
  return path;
}

} // namespace

TEST_CASE("smt encoding contains declarations, defines and the goal")
{
  harness h("void f(unsigned char x) { assert(x != 7); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  std::string smt = encode_smtlib(build_base_case(t));
  CHECK(smt.find("(set-logic QF_AUFBV)") != std::string::npos);
  CHECK(smt.find("(declare-const |x#2| (_ BitVec 8))") != std::string::npos);
  CHECK(smt.find("(check-sat)") != std::string::npos);
  CHECK(smt.find("(assert (or false") != std::string::npos);
}

TEST_CASE("smt process protocol: unsat answer")
{
  harness h("void f() { assert(true); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  std::string path = make_fake_solver("unsat", "((|x| #x00))");
  smt_options opts;
  opts.solver_path = path;
  auto v = solve_with_smt(build_base_case(t), opts);
  CHECK(v.status == solver_status::UNSAT);
  unlink(path.c_str());
}

TEST_CASE("smt process protocol: sat answer with model values")
{
  harness h("void f(unsigned char x) { assert(x != 7); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  std::string path = make_fake_solver("sat", "((|sym| #x07))");
  smt_options opts;
  opts.solver_path = path;
  auto v = solve_with_smt(build_base_case(t), opts);
  CHECK(v.status == solver_status::SAT);
  REQUIRE(!v.model.empty());
  for(const auto &[name, mv] : v.model)
    if(!mv.is_array)
      CHECK(mv.scalar == 7);
  unlink(path.c_str());
}

TEST_CASE("missing solver binary raises backend_unavailable")
{
  harness h("void f() { assert(true); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  smt_options opts;
  opts.solver_path = "/nonexistent/solver/binary";
  CHECK_THROWS_AS(solve_with_smt(build_base_case(t), opts), backend_unavailable);
}

TEST_CASE("solve() falls back to the enumerator and reports it")
{
  harness h("void f(unsigned char x) { assert(x != 9); }", "f");
  ssa_trace t = make_trace(h.ctx, 1, symex_mode::BASE_CASE);
  backend_selector backend;
  backend.kind = backend_kind::SMT;
  backend.solver_path = "/nonexistent/solver/binary";
  bool fell_back = false;
  auto v = solve(build_base_case(t), 0, backend, &fell_back);
  CHECK(fell_back);
  CHECK(v.status == solver_status::SAT);
}

// backend agreement on real formulas needs a real solver; probed at
// runtime so the suite stays honest on machines without one
TEST_CASE("backend agreement with a real SMT solver (skipped when absent)")
{
  const char *candidates[] = {"z3", "cvc5", "cvc4", "bitwuzla"};
  std::string found;
  const char *env = std::getenv("KBMC_SMT_SOLVER");
  if(env && access(env, X_OK) == 0)
    found = env;
  else
    for(const char *c : candidates)
    {
      std::string cmd = std::string("command -v ") + c + " > /dev/null 2>&1";
      if(std::system(cmd.c_str()) == 0)
      {
        found = c;
        break;
      }
    }
  if(found.empty())
  {
    MESSAGE("no SMT solver on PATH; agreement check skipped");
    return;
  }

  const char *programs[] = {
    "void f(unsigned char x) { assert(x != 7); }",
    "void f() { assert(true); }",
    "void f(unsigned char x) { unsigned char y = x / 3; assert(y <= 85); }",
    "void f() { int i = 0; while(i < 3) { i = i + 1; } assert(i == 3); }",
    "void f(unsigned char n) { int s = 0; for(int i = 0; i < n; i++) s = s + 1; assert(s >= 0); }",
  };
  for(const char *src : programs)
  {
    harness h(src, "f");
    for(int k = 1; k <= 3; k++)
    {
      ssa_trace t = make_trace(h.ctx, k, symex_mode::BASE_CASE);
      formula f = build_base_case(t);
      auto ve = solve_with_enumerator(f);
      smt_options so;
      so.solver_path = found;
      so.timeout_seconds = 20;
      auto vs = solve_with_smt(f, so);
      REQUIRE(ve.status != solver_status::UNKNOWN);
      CHECK(ve.status == vs.status);
    }
  }
}
