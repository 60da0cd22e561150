/*******************************************************************\

Module: Command line front end

\*******************************************************************/

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "driver/listing.h"
#include "driver/runner.h"
#include "frontend/lowering.h"
#include "frontend/parser.h"
#include "replay/replay.h"
#include "symex/dump.h"
#include "util/errors.h"

using namespace kbmc;

namespace
{

int cmd_verify(
  const driver_config &cfg,
  const std::string &target,
  bool dump_ssa,
  const std::string &dump_function,
  const std::string &dump_mode,
  int dump_k)
{
  if(dump_ssa)
  {
    // debug path: print the SSA trace of one function of one file
    if(dump_function.empty())
    {
      std::cerr << "--dump-ssa needs --function\n";
      return 2;
    }
    std::vector<std::string> includes;
    if(!cfg.dep_file.empty())
      includes = parse_dep_file(cfg.dep_file);
    source_unit src = load_source_unit(target, includes);
    parsed_unit unit = parse_unit(src);
    goto_model raw = lower_unit(unit);
    goto_model prepared = prepare_model(raw, dump_function, cfg.to_property_config());

    step_context ctx;
    ctx.model = &prepared;
    ctx.entry = dump_function;
    ctx.checks = cfg.to_property_config();

    symex_mode mode = dump_mode == "forward" ? symex_mode::FORWARD_CONDITION
                    : dump_mode == "inductive" ? symex_mode::INDUCTIVE_STEP
                                               : symex_mode::BASE_CASE;
    ssa_trace t = make_trace(ctx, dump_k, mode);
    std::cout << dump_trace(t);
    return 0;
  }

  project_result result = verify_project(cfg, target, std::cout);
  std::cout << "\n"
            << result.summary.files_verified << " files, "
            << result.summary.functions_verified << " functions verified\n";
  for(const auto &[type, count] : result.summary.violations_by_type)
    std::cout << "  " << count << "x " << type << "\n";
  std::cout << "report: " << cfg.out_dir << "/report.csv\n";
  return result.exit_code;
}

int cmd_replay(
  const std::string &cex_path,
  const std::string &program_path,
  const std::string &dep_file,
  bool json)
{
  std::ifstream in(cex_path);
  if(!in)
    throw io_error("cannot read counterexample: " + cex_path);
  std::stringstream ss;
  ss << in.rdbuf();
  counterexample cex = counterexample::from_json(ss.str());

  std::vector<std::string> includes;
  if(!dep_file.empty())
    includes = parse_dep_file(dep_file);
  source_unit src = load_source_unit(program_path, includes);
  parsed_unit unit = parse_unit(src);
  goto_model raw = lower_unit(unit);

  property_config checks;
  checks.memory_leaks = cex.checks.memory_leaks;
  checks.overflow = cex.checks.overflow;
  checks.pointer_checks = cex.checks.pointer_checks;
  checks.bounds_checks = cex.checks.bounds_checks;
  checks.div_by_zero = cex.checks.div_by_zero;
  goto_model prepared = prepare_model(raw, cex.function, checks);

  replay_result r = replay(prepared, cex.function, cex);

  if(json)
  {
    std::cout << "{\"outcome\":\""
              << (r.outcome == replay_outcome::REPRODUCED ? "REPRODUCED"
                  : r.outcome == replay_outcome::CLEAN ? "CLEAN"
                                                       : "DIVERGED")
              << "\",\"property\":\"" << property_class_name(r.property)
              << "\",\"line\":" << r.line << ",\"crash_equivalent\":"
              << (r.crash_equivalent ? "true" : "false") << ",\"reason\":\""
              << r.reason << "\"}\n";
  }
  else
  {
    switch(r.outcome)
    {
    case replay_outcome::REPRODUCED:
      std::cout << "REPRODUCED " << property_class_name(r.property) << " at line "
                << r.line << (r.crash_equivalent ? " (crash)" : "") << "\n";
      break;
    case replay_outcome::DIVERGED:
      std::cout << "DIVERGED: " << r.reason << "\n";
      break;
    case replay_outcome::CLEAN:
      std::cout << "CLEAN\n";
      break;
    }
  }
  return r.outcome == replay_outcome::REPRODUCED ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"kbmc: a bounded model checker with multi-core k-induction "
               "for a mini-C language"};
  app.require_subcommand(1);

  // ---- verify ----
  auto *verify = app.add_subcommand("verify", "verify every function of every .c file in a directory");
  driver_config cfg;
  std::string target = ".";
  std::string backend_name = "enum";
  bool dump_ssa = false;
  std::string dump_function, dump_mode = "base";
  int dump_k = 1;

  verify->add_flag("-m", cfg.memory_leaks, "enable memory leak checks");
  verify->add_option("-u", cfg.unwind, "number of loop unwindings for plain BMC")
    ->check(CLI::PositiveNumber);
  verify->add_flag("--nu", cfg.no_unwinding_assertions, "disable unwinding assertions");
  verify->add_flag("--ib", cfg.incremental, "enable incremental BMC");
  verify->add_flag("-p", cfg.no_pointer_check, "disable pointer checks");
  verify->add_flag("-o", cfg.overflow, "enable overflow checks");
  verify->add_option("-t", cfg.timeout_seconds, "per-function timeout in seconds")
    ->check(CLI::PositiveNumber);
  verify->add_option("-i", cfg.dep_file, "dependency file: one include path per line");
  verify->add_flag("-k", cfg.parallel_kinduction, "enable multi-core k-induction");
  verify->add_flag("-w", cfg.witness, "export a witness file per violation");
  verify->add_flag("-f", cfg.per_function, "verify function by function");
  verify->add_option("--max-k", cfg.max_k, "iteration cap for the incremental engines");
  verify->add_option("--solver", cfg.backend.solver_path, "external SMT solver binary");
  verify->add_option("--backend", backend_name, "solver backend: enum or smt")
    ->check(CLI::IsMember({"enum", "smt"}));
  verify->add_option("--out", cfg.out_dir, "output directory");
  verify->add_flag("--dump-ssa", dump_ssa, "print the SSA trace instead of verifying (needs --function, FILE target)");
  verify->add_option("--function", dump_function, "function for --dump-ssa");
  verify->add_option("--mode", dump_mode, "--dump-ssa mode: base, forward or inductive")
    ->check(CLI::IsMember({"base", "forward", "inductive"}));
  verify->add_option("--dump-k", dump_k, "--dump-ssa unwind bound");
  verify->add_option("dir", target, "project directory (or a .c file with --dump-ssa)");

  // ---- replay ----
  auto *rep = app.add_subcommand("replay", "re-execute a counterexample concretely");
  std::string cex_path, program_path, rep_dep;
  bool rep_json = false;
  rep->add_option("--cex", cex_path, "counterexample JSON file")->required();
  rep->add_option("--program", program_path, "the .c source file")->required();
  rep->add_option("-i", rep_dep, "dependency file");
  rep->add_flag("--json", rep_json, "machine-readable output");

  // the classic spellings -nu and -ib are two-letter short flags, which
  // the option parser models as single-dash long names
  std::vector<std::string> args;
  for(int i = 1; i < argc; i++)
  {
    std::string a = argv[i];
    if(a == "-nu")
      a = "--nu";
    else if(a == "-ib")
      a = "--ib";
    args.push_back(std::move(a));
  }
  std::reverse(args.begin(), args.end());

  try
  {
    app.parse(args);
  }
  catch(const CLI::ParseError &e)
  {
    return app.exit(e);
  }

  try
  {
    if(*verify)
    {
      if(backend_name == "smt" || !cfg.backend.solver_path.empty())
        cfg.backend.kind = backend_kind::SMT;
      return cmd_verify(cfg, target, dump_ssa, dump_function, dump_mode, dump_k);
    }
    if(*rep)
      return cmd_replay(cex_path, program_path, rep_dep, rep_json);
  }
  catch(const std::exception &e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
