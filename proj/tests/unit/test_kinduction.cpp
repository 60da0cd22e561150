/*******************************************************************\

Module: Engine tests

\*******************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.h"
#include "kinduction/coordinator.h"

using namespace kbmc;
using namespace kbmc::test;

namespace
{

const char *bug_at_depth_3 =
  "void f() { int i = 0; while(i < 5) { i = i + 1; assert(i != 3); } }";

const char *safe_terminating =
  "void f() { int i = 0; for(int j = 0; j < 5; j++) i = i + 1; assert(i == 5); }";

const char *safe_inductive =
  "void f() {\n"
  "  unsigned char i = 0;\n"
  "  unsigned char n = nondet_uchar();\n"
  "  while(i < n) { i = i + 1; assert(i <= n); }\n"
  "}\n";

} // namespace

TEST_CASE("base case operation matches the concrete depth")
{
  harness h(bug_at_depth_3, "f");
  // oracle: the interpreter reports the violation at depth 3
  auto concrete = run_concrete(h);
  REQUIRE(concrete.status == interp_status::VIOLATION);
  REQUIRE(concrete.violation->depth == 3);

  CHECK(base_case(h.ctx, 2).outcome == base_case_outcome::CLEAN);
  auto r3 = base_case(h.ctx, 3);
  CHECK(r3.outcome == base_case_outcome::CEX_FOUND);
  REQUIRE(r3.cex.has_value());
  CHECK(r3.cex->depth == 3);
}

TEST_CASE("assert-free programs have a clean base case at every bound")
{
  property_config pc;
  harness h("int g(unsigned char a) { int b = a + 1; return b; }", "g", pc);
  for(int k = 1; k <= 4; k++)
    CHECK(base_case(h.ctx, k).outcome == base_case_outcome::CLEAN);
}

TEST_CASE("forward condition matches the interpreter's termination depth")
{
  harness h("void f() { int i = 0; for(int j = 0; j < 5; j++) i = i + 1; }", "f");
  auto concrete = run_concrete(h);
  REQUIRE(concrete.status == interp_status::FINISHED);
  REQUIRE(concrete.max_depth_seen == 5);

  CHECK(forward_condition(h.ctx, 5) == forward_outcome::TERMINATED);
  CHECK(forward_condition(h.ctx, 4) == forward_outcome::NOT_YET);
}

TEST_CASE("nonterminating loops never satisfy the forward condition")
{
  harness h("void f() { int i = 0; while(true) { i = i + 1; } }", "f");
  for(int k = 1; k <= 3; k++)
    CHECK(forward_condition(h.ctx, k) == forward_outcome::NOT_YET);
}

TEST_CASE("sequential k-induction finds the bug at its depth")
{
  harness h(bug_at_depth_3, "f");
  verdict v = kinduction_sequential(h.ctx);
  CHECK(v.status == verdict_status::FALSE_VERDICT);
  CHECK(v.winning_step == winning_step_kind::BASE_CASE);
  CHECK(v.k_final == 3);
  REQUIRE(v.cex.has_value());
}

TEST_CASE("sequential k-induction proves terminating programs via the forward condition")
{
  harness h(safe_terminating, "f");
  verdict v = kinduction_sequential(h.ctx);
  CHECK(v.status == verdict_status::TRUE_VERDICT);
  CHECK(v.winning_step == winning_step_kind::FORWARD_CONDITION);
  CHECK(v.k_final == 5);
}

TEST_CASE("sequential k-induction proves unbounded loops via the inductive step")
{
  harness h(safe_inductive, "f");
  verdict v = kinduction_sequential(h.ctx);
  CHECK(v.status == verdict_status::TRUE_VERDICT);
  CHECK(v.winning_step == winning_step_kind::INDUCTIVE_STEP);
}

TEST_CASE("incremental BMC: falsification and bounded proofs")
{
  harness bug("void f() { assert(false); }", "f");
  verdict v1 = bmc_incremental(bug.ctx);
  CHECK(v1.status == verdict_status::FALSE_VERDICT);
  CHECK(v1.k_final == 1);

  harness safe("void g() { int x = 1; assert(x == 1); }", "g");
  verdict v2 = bmc_incremental(safe.ctx);
  CHECK(v2.status == verdict_status::TRUE_VERDICT);
  CHECK(v2.k_final == 1);
}

TEST_CASE("incremental BMC stops at the iteration cap")
{
  // bug at depth 7, cap 5
  std::string src =
    "void f() { int i = 0; while(i < 9) { i = i + 1; assert(i != 7); } }";
  harness h(src, "f");
  h.ctx.cfg.max_iterations = 5;
  verdict v = bmc_incremental(h.ctx);
  CHECK(v.status == verdict_status::UNKNOWN_VERDICT);
  CHECK(v.k_final == 5);

  h.ctx.cfg.max_iterations = 50;
  verdict v2 = bmc_incremental(h.ctx);
  CHECK(v2.status == verdict_status::FALSE_VERDICT);
  CHECK(v2.k_final == 7);
}

TEST_CASE("incremental BMC cannot prove unbounded-input loops that induction can")
{
  harness h(safe_inductive, "f");
  h.ctx.cfg.max_iterations = 50;
  verdict bmc = bmc_incremental(h.ctx);
  CHECK(bmc.status == verdict_status::UNKNOWN_VERDICT);

  verdict kind = kinduction_sequential(h.ctx);
  CHECK(kind.status == verdict_status::TRUE_VERDICT);
  CHECK(kind.winning_step == winning_step_kind::INDUCTIVE_STEP);
}

TEST_CASE("single-shot BMC reports unwinding violations unless disabled")
{
  std::string src = "void f() { int i = 0; while(i < 5) { i = i + 1; } }";
  harness h(src, "f");
  h.ctx.cfg.unwinding_assertions = true;
  verdict v = bmc_single_shot(h.ctx, 2);
  CHECK(v.status == verdict_status::FALSE_VERDICT);
  REQUIRE(v.cex.has_value());
  CHECK(v.cex->violated.property == property_class::UNWINDING);
  CHECK(v.cex->violated.rendered == "unwinding assertion loop 1");

  h.ctx.cfg.unwinding_assertions = false; // -nu
  verdict v2 = bmc_single_shot(h.ctx, 2);
  CHECK(v2.status == verdict_status::TRUE_VERDICT);

  verdict v3 = bmc_single_shot(h.ctx, 5);
  v3 = bmc_single_shot(h.ctx, 5);
  CHECK(v3.status == verdict_status::TRUE_VERDICT);
}

TEST_CASE("engine never reports both safe and unsafe across the proof steps")
{
  // the termination/error exclusivity argument, checked per bound
  for(const char *src : {bug_at_depth_3, safe_terminating, safe_inductive})
  {
    harness h(src, "f");
    for(int k = 1; k <= 4; k++)
    {
      auto b = base_case(h.ctx, k);
      auto fw = forward_condition(h.ctx, k);
      bool unsafe = b.outcome == base_case_outcome::CEX_FOUND;
      bool terminated = fw == forward_outcome::TERMINATED;
      auto is_ = inductive_step(h.ctx, k);
      bool inductive = is_ == inductive_outcome::INDUCTIVE;
      CHECK(!(unsafe && (terminated || inductive)));
    }
  }
}

// ---- coordinator decision logic ----

namespace
{

worker_message msg(
  worker_id w,
  worker_message::payload_kind kind,
  int k,
  std::optional<counterexample> cex = std::nullopt)
{
  worker_message m;
  m.worker = w;
  m.kind = kind;
  m.k = k;
  m.cex = std::move(cex);
  return m;
}

} // namespace

TEST_CASE("coordinator: BCP counterexample wins immediately")
{
  coordinator c;
  counterexample cex;
  cex.violated.line = 5;
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::FOUND, 2, cex));
  REQUIRE(c.decided());
  CHECK(c.result().status == verdict_status::FALSE_VERDICT);
  CHECK(c.result().winning_step == winning_step_kind::BASE_CASE);
  CHECK(c.result().k_final == 2);
}

TEST_CASE("coordinator: forward result waits for base-case progress")
{
  coordinator c;
  c.feed(msg(worker_id::FCP, worker_message::payload_kind::FOUND, 3));
  CHECK(!c.decided()); // pi(k) needs B(k) refuted too
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::PROGRESS, 2));
  CHECK(!c.decided());
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::PROGRESS, 3));
  REQUIRE(c.decided());
  CHECK(c.result().status == verdict_status::TRUE_VERDICT);
  CHECK(c.result().winning_step == winning_step_kind::FORWARD_CONDITION);
}

TEST_CASE("coordinator: first conclusive result wins over later contradictions")
{
  coordinator c;
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::PROGRESS, 2));
  c.feed(msg(worker_id::FCP, worker_message::payload_kind::FOUND, 2));
  REQUIRE(c.decided());
  CHECK(c.result().status == verdict_status::TRUE_VERDICT);

  // a BCP FALSE arriving afterwards is logged but cannot flip the verdict
  counterexample cex;
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::FOUND, 3, cex));
  CHECK(c.result().status == verdict_status::TRUE_VERDICT);
  CHECK(c.log().size() == 3);
}

TEST_CASE("coordinator: FCP precedes ISP when both are eligible")
{
  coordinator c;
  c.feed(msg(worker_id::ISP, worker_message::payload_kind::FOUND, 2));
  c.feed(msg(worker_id::FCP, worker_message::payload_kind::FOUND, 2));
  CHECK(!c.decided());
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::PROGRESS, 2));
  REQUIRE(c.decided());
  CHECK(c.result().winning_step == winning_step_kind::FORWARD_CONDITION);
}

TEST_CASE("coordinator: exhaustion of all workers yields UNKNOWN")
{
  coordinator c;
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::EXHAUSTED, 50));
  c.feed(msg(worker_id::FCP, worker_message::payload_kind::EXHAUSTED, 50));
  CHECK(!c.decided());
  c.feed(msg(worker_id::ISP, worker_message::payload_kind::EXHAUSTED, 50));
  REQUIRE(c.decided());
  CHECK(c.result().status == verdict_status::UNKNOWN_VERDICT);
}

TEST_CASE("coordinator: a crashed worker degrades gracefully")
{
  coordinator c;
  c.worker_gone(worker_id::ISP);
  CHECK(!c.decided());
  counterexample cex;
  c.feed(msg(worker_id::BCP, worker_message::payload_kind::FOUND, 1, cex));
  REQUIRE(c.decided());
  CHECK(c.result().status == verdict_status::FALSE_VERDICT);
}

TEST_CASE("coordinator: all workers crashing is an unknown with an error")
{
  coordinator c;
  c.worker_gone(worker_id::BCP);
  c.worker_gone(worker_id::FCP);
  c.worker_gone(worker_id::ISP);
  REQUIRE(c.decided());
  CHECK(c.result().status == verdict_status::UNKNOWN_VERDICT);
  CHECK(c.result().unknown_reason.find("worker") != std::string::npos);
}

TEST_CASE("worker messages survive the wire format")
{
  counterexample cex;
  cex.violated.line = 9;
  cex.violated.rendered = "division by zero";
  cex.nondet_values["f.I3"] = 0;
  worker_message m = msg(worker_id::BCP, worker_message::payload_kind::FOUND, 4, cex);
  auto back = worker_message::from_json(m.to_json());
  REQUIRE(back.has_value());
  CHECK(back->worker == worker_id::BCP);
  CHECK(back->k == 4);
  REQUIRE(back->cex.has_value());
  CHECK(back->cex->violated.line == 9);
  CHECK(back->cex->nondet_values.at("f.I3") == 0);
}

// ---- parallel engine (real processes) ----

TEST_CASE("parallel verdicts agree with sequential ones")
{
  struct entry
  {
    const char *src;
    verdict_status expect;
  };
  const entry cases[] = {
    {bug_at_depth_3, verdict_status::FALSE_VERDICT},
    {safe_terminating, verdict_status::TRUE_VERDICT},
    {safe_inductive, verdict_status::TRUE_VERDICT},
  };
  for(const auto &c : cases)
  {
    harness h(c.src, "f");
    verdict seq = kinduction_sequential(h.ctx);
    REQUIRE(seq.status == c.expect);

    h.ctx.cfg.mode = engine_mode::PARALLEL;
    verdict par = kinduction_parallel(h.ctx);
    CHECK(par.status == seq.status);
    if(par.status == verdict_status::FALSE_VERDICT)
    {
      REQUIRE(par.cex.has_value());
      CHECK(par.cex->violated.line == seq.cex->violated.line);
    }
  }
}

TEST_CASE("parallel runs respect the wall-clock deadline")
{
  // all three workers grind on a wide search; the deadline cuts them off
  std::string src =
    "void f(unsigned short a, unsigned short b) {\n"
    "  unsigned r = (unsigned)a * (unsigned)b;\n"
    "  assert(r != 65027 * 65027);\n"
    "}\n";
  harness h(src, "f");
  h.ctx.cfg.overall = deadline::after_seconds(1.0);
  auto t0 = std::chrono::steady_clock::now();
  verdict v = kinduction_parallel(h.ctx);
  double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  CHECK(took < 5.0);
  (void)v; // any status is acceptable under a cut deadline
}
