/*******************************************************************\

Module: Frontend tests

\*******************************************************************/

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "frontend/lowering.h"
#include "frontend/parser.h"
#include "properties/instrument.h"
#include "replay/interpreter.h"
#include "symex/loops.h"
#include "util/errors.h"

using namespace kbmc;

TEST_CASE("single declaration")
{
  auto unit = parse_string("int f(){return 0;}");
  REQUIRE(unit.unit_functions.size() == 1);
  CHECK(unit.unit_functions[0].name == "f");
  CHECK(unit.unit_functions[0].decl_line == 1);
}

TEST_CASE("empty file has no declarations")
{
  auto unit = parse_string("");
  CHECK(unit.unit_functions.empty());
}

TEST_CASE("functions listed in declaration order")
{
  // the four functions of PuTTY's sshbcrypt.c, reduced to stubs
  std::string src =
    "void bcrypt_genblock(int counter) { }\n"
    "void bcrypt_hash(int x) { }\n"
    "void bcrypt_setup(int k) { }\n"
    "void openssh_bcrypt(int passphrase) { }\n";
  auto unit = parse_string(src, "sshbcrypt.c");
  REQUIRE(unit.unit_functions.size() == 4);
  CHECK(unit.unit_functions[0].name == "bcrypt_genblock");
  CHECK(unit.unit_functions[1].name == "bcrypt_hash");
  CHECK(unit.unit_functions[2].name == "bcrypt_setup");
  CHECK(unit.unit_functions[3].name == "openssh_bcrypt");
}

TEST_CASE("syntax error carries line number")
{
  try
  {
    parse_string("int f() {\n  int x = ;\n}");
    FAIL("expected parse_error");
  }
  catch(const parse_error &e)
  {
    CHECK(e.line == 2);
  }
}

TEST_CASE("duplicate function rejected")
{
  CHECK_THROWS_AS(parse_string("int f(){return 0;}\nint f(){return 1;}"), parse_error);
}

TEST_CASE("while lowering produces guarded goto skeleton")
{
  auto unit = parse_string("void f(int c) { while(c) { c = c - 1; } }");
  goto_program gp = lower_to_goto(unit.unit_functions[0], unit);

  // expected shape: [head: GOTO(!c, exit), ASSIGN, GOTO(true, head), END]
  auto loops = find_loops(gp);
  REQUIRE(loops.size() == 1);
  const auto &l = loops[0];
  CHECK(gp.instructions[l.back].kind == goto_kind::GOTO);
  CHECK(gp.instructions[l.back].target == l.head);
  CHECK(is_true(gp.instructions[l.back].guard));
  REQUIRE(l.exit_goto >= 0);
  CHECK(gp.instructions[l.exit_goto].target > l.back);
}

TEST_CASE("if/else lowering")
{
  auto unit = parse_string("void f(int a) { int x; if(a) x=1; else x=2; }");
  goto_program gp = lower_to_goto(unit.unit_functions[0], unit);
  CHECK(validate_goto_program(gp).empty());
  // no loops in an if/else
  CHECK(find_loops(gp).empty());
  int gotos = 0, assigns = 0;
  for(const auto &in : gp.instructions)
  {
    if(in.kind == goto_kind::GOTO)
      gotos++;
    if(in.kind == goto_kind::ASSIGN)
      assigns++;
  }
  CHECK(gotos == 2);
  CHECK(assigns == 2);
}

TEST_CASE("three nested loops have three loop heads")
{
  std::string src =
    "void f(int n) {\n"
    "  for(int i=0;i<n;i++)\n"
    "    for(int j=0;j<n;j++)\n"
    "      for(int k=0;k<n;k++)\n"
    "        n = n;\n"
    "}\n";
  auto unit = parse_string(src);
  goto_program gp = lower_to_goto(unit.unit_functions[0], unit);
  CHECK(find_loops(gp).size() == 3);
}

TEST_CASE("jump totality holds for every lowered program")
{
  std::string src =
    "int abs32(int v) { if(v < 0) return -v; return v; }\n"
    "int sum(int n) { int s = 0; for(int i=0;i<n;i++) s += i; return s; }\n"
    "void touch(int a) { int b[4]; b[a] = 1; while(b[0]) b[0] = b[0] - 1; }\n";
  auto unit = parse_string(src);
  for(const auto &fn : unit.unit_functions)
  {
    goto_program gp = lower_to_goto(fn, unit);
    CHECK(validate_goto_program(gp).empty());
    for(const auto &in : gp.instructions)
      if(in.kind == goto_kind::GOTO)
      {
        CHECK(in.target >= 0);
        CHECK(in.target < static_cast<int>(gp.instructions.size()));
      }
  }
}

TEST_CASE("mark_entry_nondet havocs scalar parameters")
{
  auto unit = parse_string("void f(int a) { a = a + 1; }");
  goto_program gp = mark_entry_nondet(lower_to_goto(unit.unit_functions[0], unit));
  REQUIRE(gp.instructions.size() >= 2);
  CHECK(gp.instructions[0].kind == goto_kind::DECL);
  CHECK(gp.instructions[0].symbol == "a");
  CHECK(gp.instructions[1].kind == goto_kind::HAVOC);
  CHECK(gp.instructions[1].symbol == "a");
  CHECK(validate_goto_program(gp).empty());
}

TEST_CASE("mark_entry_nondet models pointers as NULL or fresh object")
{
  auto unit = parse_string("int g(int* p) { return *p; }");
  goto_program gp = mark_entry_nondet(lower_to_goto(unit.unit_functions[0], unit));
  bool has_malloc = false, has_null_assign = false, has_choice = false;
  for(const auto &in : gp.instructions)
  {
    if(in.kind == goto_kind::MALLOC && in.param_object)
      has_malloc = true;
    if(in.kind == goto_kind::ASSIGN && in.rhs->kind == expr_kind::CONSTANT &&
       in.rhs->type && in.rhs->type->is_pointer() && in.rhs->bits == 0)
      has_null_assign = true;
    if(in.kind == goto_kind::HAVOC && in.symbol == "__choice_p")
      has_choice = true;
  }
  CHECK(has_malloc);
  CHECK(has_null_assign);
  CHECK(has_choice);
  CHECK(validate_goto_program(gp).empty());
}

TEST_CASE("mark_entry_nondet leaves parameterless functions unchanged")
{
  auto unit = parse_string("int h() { return 3; }");
  goto_program before = lower_to_goto(unit.unit_functions[0], unit);
  goto_program after = mark_entry_nondet(before);
  CHECK(after.instructions.size() == before.instructions.size());
}

TEST_CASE("type errors are reported")
{
  auto unit = parse_string("void f(int* p, int* q) { int x; x = p; }");
  CHECK_THROWS_AS(lower_to_goto(unit.unit_functions[0], unit), type_error);

  auto unit2 = parse_string("void f(int* p, int* q) { bool b; b = p < q; }");
  CHECK_THROWS_AS(lower_to_goto(unit2.unit_functions[0], unit2), unsupported_construct);
}

TEST_CASE("unsupported constructs are rejected at parse time")
{
  CHECK_THROWS_AS(parse_string("void f() { goto done; done: ; }"), unsupported_construct);
  CHECK_THROWS_AS(parse_string("void f(int* p) { int* q = &p; }"), unsupported_construct);
  CHECK_THROWS_AS(parse_string("int f();"), unsupported_construct);
}

TEST_CASE("line fidelity: claims sit on statement lines")
{
  std::string src =
    "int f(int a, int b) {\n"     // 1
    "  int c = a / b;\n"          // 2
    "  int d[3];\n"               // 3
    "  d[a] = c;\n"               // 4
    "  assert(d[a] > 0);\n"       // 5
    "  return d[0];\n"            // 6
    "}\n";
  auto unit = parse_string(src);
  property_config cfg;
  cfg.overflow = true;
  goto_program gp = instrument(lower_to_goto(unit.unit_functions[0], unit), cfg);
  std::set<int> statement_lines = {1, 2, 3, 4, 5, 6};
  for(const auto &in : gp.instructions)
    if(in.kind == goto_kind::ASSERT)
      CHECK(statement_lines.count(in.source_line) == 1);
}

TEST_CASE("interpreter runs a simple loop to completion")
{
  std::string src =
    "int f() {\n"
    "  int i = 0;\n"
    "  while(i < 2) { i = i + 1; }\n"
    "  assert(i == 2);\n"
    "  return i;\n"
    "}\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  for(auto &[name, gp] : model.functions)
    gp = instrument(gp, cfg);
  zero_nondet_source zeros;
  auto r = interpret(model, "f", zeros);
  CHECK(r.status == interp_status::FINISHED);
  CHECK(r.max_depth_seen == 2);
}

TEST_CASE("interpreter reports division by zero with havocked input")
{
  std::string src = "int f(int z) { return 10 / z; }\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  model.functions["f"] = instrument(mark_entry_nondet(model.functions["f"]), cfg);
  zero_nondet_source zeros; // z = 0
  auto r = interpret(model, "f", zeros);
  REQUIRE(r.status == interp_status::VIOLATION);
  CHECK(r.violation->property == property_class::DIV_BY_ZERO);
  CHECK(r.violation->rendered == "division by zero");
  CHECK(r.violation->line == 1);
}

TEST_CASE("interpreter catches double free")
{
  std::string src =
    "void f() {\n"
    "  int* p = malloc(4);\n"
    "  free(p);\n"
    "  free(p);\n"
    "}\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  for(auto &[name, gp] : model.functions)
    gp = instrument(gp, cfg);
  zero_nondet_source zeros;
  auto r = interpret(model, "f", zeros);
  REQUIRE(r.status == interp_status::VIOLATION);
  CHECK(r.violation->property == property_class::DOUBLE_FREE);
  CHECK(r.violation->line == 4);
}

TEST_CASE("interpreter reports memory leak at end of function")
{
  std::string src =
    "void f() {\n"
    "  int* p = malloc(4);\n"
    "  p = NULL;\n"
    "}\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  cfg.memory_leaks = true;
  for(auto &[name, gp] : model.functions)
    gp = instrument(gp, cfg);
  zero_nondet_source zeros;
  auto r = interpret(model, "f", zeros);
  REQUIRE(r.status == interp_status::VIOLATION);
  CHECK(r.violation->property == property_class::MEMORY_LEAK);
  CHECK(r.violation->rendered == "dereference failure: forgotten memory: dynamic_1_array");
}

TEST_CASE("returned allocation does not leak")
{
  std::string src = "int* f() { int* p = malloc(4); return p; }\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  cfg.memory_leaks = true;
  for(auto &[name, gp] : model.functions)
    gp = instrument(gp, cfg);
  zero_nondet_source zeros;
  auto r = interpret(model, "f", zeros);
  CHECK(r.status == interp_status::FINISHED);
}

TEST_CASE("null dereference through havocked pointer parameter")
{
  std::string src =
    "struct sll { int data; struct sll* next; };\n"
    "struct sll* next_entry(struct sll* cur) { return cur->next; }\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  model.functions["next_entry"] =
    instrument(mark_entry_nondet(model.functions["next_entry"]), cfg);
  zero_nondet_source zeros; // choice = 0 selects the NULL branch
  auto r = interpret(model, "next_entry", zeros);
  REQUIRE(r.status == interp_status::VIOLATION);
  CHECK(r.violation->property == property_class::NULL_DEREF);
  CHECK(r.violation->rendered == "dereference failure: NULL pointer");
}

TEST_CASE("function calls are interpreted with per-frame locals")
{
  std::string src =
    "int dbl(int x) { return x + x; }\n"
    "int f() { int x = 3; int y = dbl(4); assert(y == 8); assert(x == 3); return y; }\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  for(auto &[name, gp] : model.functions)
    gp = instrument(gp, cfg);
  zero_nondet_source zeros;
  auto r = interpret(model, "f", zeros);
  CHECK(r.status == interp_status::FINISHED);
}

TEST_CASE("struct locals are flattened and usable")
{
  std::string src =
    "struct point { int x; int y; };\n"
    "int f() {\n"
    "  struct point p;\n"
    "  p.x = 2;\n"
    "  p.y = 3;\n"
    "  assert(p.x + p.y == 5);\n"
    "  return p.x;\n"
    "}\n";
  auto unit = parse_string(src);
  goto_model model = lower_unit(unit);
  property_config cfg;
  for(auto &[name, gp] : model.functions)
    gp = instrument(gp, cfg);
  zero_nondet_source zeros;
  auto r = interpret(model, "f", zeros);
  CHECK(r.status == interp_status::FINISHED);
}

TEST_CASE("loop_modified_vars on canonical examples")
{
  auto unit = parse_string(
    "void f(int n) { int i = 0; while(i<n) { i++; } }\n"
    "void g(bool c, int j) { int a[3]; while(c) { a[j] = 0; j++; } }\n"
    "void h() { int x = 1; x = x + 1; }\n");
  auto m1 = loop_modified_vars(lower_to_goto(unit.unit_functions[0], unit));
  CHECK(m1 == std::set<std::string>{"i"});
  auto m2 = loop_modified_vars(lower_to_goto(unit.unit_functions[1], unit));
  CHECK(m2 == std::set<std::string>{"a", "j"});
  auto m3 = loop_modified_vars(lower_to_goto(unit.unit_functions[2], unit));
  CHECK(m3.empty());
}

TEST_CASE("include resolution against search paths")
{
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "kbmc_inc_test";
  fs::create_directories(dir / "inc");
  {
    std::ofstream h(dir / "inc" / "defs.h");
    h << "int helper(int v) { return v + 1; }\n";
  }
  {
    std::ofstream c(dir / "main.c");
    c << "#include \"defs.h\"\n#include <stdio.h>\nint top() { return helper(1); }\n";
  }
  source_unit src = load_source_unit((dir / "main.c").string(), {(dir / "inc").string()});
  auto unit = parse_unit(src);
  REQUIRE(unit.unit_functions.size() == 1);
  CHECK(unit.unit_functions[0].name == "top");
  REQUIRE(unit.include_functions.size() == 1);
  CHECK(unit.include_functions[0].name == "helper");
  CHECK(unit.warnings.size() == 1); // the <stdio.h> include

  source_unit bad = src;
  bad.includes.clear();
  CHECK_THROWS_AS(parse_unit(bad), include_not_found);
}
