#include "driver/runner.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "driver/listing.h"
#include "driver/witness.h"
#include "frontend/lowering.h"
#include "frontend/parser.h"
#include "util/errors.h"

namespace fs = std::filesystem;

namespace kbmc
{

property_config driver_config::to_property_config() const
{
  property_config pc;
  pc.memory_leaks = memory_leaks;
  pc.overflow = overflow;
  pc.pointer_checks = !no_pointer_check;
  return pc;
}

namespace
{

std::string stem_of(const std::string &path)
{
  return fs::path(path).stem().string();
}

row_status status_of(const verdict &v)
{
  switch(v.status)
  {
  case verdict_status::TRUE_VERDICT:
    return row_status::SUCCESS;
  case verdict_status::FALSE_VERDICT:
    return row_status::FAILED;
  case verdict_status::UNKNOWN_VERDICT:
    return v.unknown_reason.find("timeout") != std::string::npos
      ? row_status::TIMEOUT
      : row_status::UNKNOWN;
  }
  return row_status::UNKNOWN;
}

} // namespace

function_job_result run_function_job(
  const driver_config &cfg,
  const std::string &file,
  const std::string &function)
{
  function_job_result out;
  out.row.filename = fs::path(file).filename().string();
  out.row.function = function;

  std::ostringstream log;
  auto start = std::chrono::steady_clock::now();

  try
  {
    std::vector<std::string> includes;
    if(!cfg.dep_file.empty())
      includes = parse_dep_file(cfg.dep_file);
    source_unit src = load_source_unit(file, includes);
    parsed_unit unit = parse_unit(src);

    if(!unit.find_function(function))
      throw type_error(0, "no function '" + function + "' in " + file);

    // lower everything reachable; unrelated broken functions are skipped
    goto_model raw;
    raw.structs = unit.structs;
    auto lower_all = [&](const std::vector<function_decl> &fns) {
      for(const auto &fn : fns)
      {
        try
        {
          raw.functions.emplace(fn.name, lower_to_goto(fn, unit));
        }
        catch(const std::exception &e)
        {
          if(fn.name == function)
            throw;
          log << "note: skipping " << fn.name << ": " << e.what() << "\n";
        }
      }
    };
    lower_all(unit.unit_functions);
    lower_all(unit.include_functions);

    property_config checks = cfg.to_property_config();
    goto_model prepared = prepare_model(raw, function, checks);

    step_context ctx;
    ctx.model = &prepared;
    ctx.entry = function;
    ctx.checks = checks;
    ctx.cfg.max_iterations = cfg.max_k;
    ctx.cfg.backend = cfg.backend;
    ctx.cfg.unwinding_assertions = !cfg.no_unwinding_assertions;
    if(cfg.timeout_seconds > 0)
    {
      ctx.cfg.overall = deadline::after_seconds(cfg.timeout_seconds);
      ctx.cfg.per_call_timeout = cfg.timeout_seconds;
    }

    verdict v;
    if(cfg.parallel_kinduction)
    {
      ctx.cfg.mode = engine_mode::PARALLEL;
      v = kinduction_parallel(ctx);
      log << "engine: parallel k-induction\n";
    }
    else if(cfg.incremental)
    {
      ctx.cfg.mode = engine_mode::INCREMENTAL_BMC_ONLY;
      v = bmc_incremental(ctx);
      log << "engine: incremental BMC\n";
    }
    else
    {
      v = bmc_single_shot(ctx, cfg.unwind);
      log << "engine: BMC, unwind " << cfg.unwind
          << (ctx.cfg.unwinding_assertions ? "" : ", no unwinding assertions")
          << "\n";
    }

    out.row.status = status_of(v);
    out.row.k = v.k_final;
    if(v.backend_fallback)
      log << "note: SMT solver unavailable, fell back to the enumerator\n";
    if(v.status == verdict_status::FALSE_VERDICT && v.cex)
    {
      out.cex = v.cex;
      out.cex->source_file = file;
      out.cex->function = function;
      out.row.violated_line = v.cex->violated.line;
      out.row.violation_type = v.cex->violated.rendered;
      log << out.cex->to_text();
    }
    else if(v.status == verdict_status::TRUE_VERDICT)
      log << "VERIFICATION SUCCESSFUL"
          << (v.winning_step == winning_step_kind::NONE
                ? " (up to the unwind bound)"
                : std::string(" (") + winning_step_name(v.winning_step) + ")")
          << "\n";
    else
      log << "VERIFICATION UNKNOWN: " << v.unknown_reason << "\n";
  }
  catch(const std::exception &e)
  {
    out.row.status = row_status::UNKNOWN;
    log << "error: " << e.what() << "\n";
  }

  out.row.seconds =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.log_text = log.str();
  return out;
}

namespace
{

// run the job in a child process; enforce the wall budget with a hard
// kill so that runaway unrolling or solving cannot block the project
function_job_result run_isolated(
  const driver_config &cfg,
  const std::string &file,
  const std::string &function)
{
  int pipefd[2];
  if(pipe(pipefd) != 0)
    throw io_error("pipe() failed");

  auto start = std::chrono::steady_clock::now();
  pid_t pid = fork();
  if(pid < 0)
    throw io_error("fork() failed");
  if(pid == 0)
  {
    close(pipefd[0]);
    setpgid(0, 0); // own process group, so the kill reaches grandchildren
    function_job_result r = run_function_job(cfg, file, function);
    nlohmann::json j;
    j["row"] = nlohmann::json::parse(r.row.to_json());
    if(r.cex)
      j["cex"] = nlohmann::json::parse(r.cex->to_json());
    j["log"] = r.log_text;
    std::string line = j.dump() + "\n";
    ssize_t ignored = write(pipefd[1], line.data(), line.size());
    (void)ignored;
    close(pipefd[1]);
    _exit(0);
  }

  close(pipefd[1]);
  setpgid(pid, pid);

  const double grace = 2.0;
  double budget =
    cfg.timeout_seconds > 0 ? cfg.timeout_seconds + grace : 0;

  std::string buffer;
  bool timed_out = false;
  for(;;)
  {
    struct pollfd pfd = {pipefd[0], POLLIN, 0};
    int pr = poll(&pfd, 1, 100);
    if(pr > 0)
    {
      char chunk[65536];
      ssize_t n = read(pipefd[0], chunk, sizeof chunk);
      if(n > 0)
      {
        buffer.append(chunk, static_cast<std::size_t>(n));
        continue;
      }
      break; // EOF
    }
    double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if(budget > 0 && elapsed > budget)
    {
      timed_out = true;
      kill(-pid, SIGKILL);
      break;
    }
  }
  close(pipefd[0]);
  int wstatus = 0;
  waitpid(pid, &wstatus, 0);

  double elapsed =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  function_job_result out;
  out.row.filename = fs::path(file).filename().string();
  out.row.function = function;
  out.row.seconds = elapsed;

  if(timed_out)
  {
    out.row.status = row_status::TIMEOUT;
    out.log_text = "killed: per-function timeout exceeded\n";
    return out;
  }

  auto nl = buffer.find('\n');
  if(nl == std::string::npos)
  {
    out.row.status = row_status::UNKNOWN;
    out.log_text = "engine process terminated without a result\n";
    return out;
  }
  try
  {
    nlohmann::json j = nlohmann::json::parse(buffer.substr(0, nl));
    out.row = report_row::from_json(j["row"].dump());
    out.row.seconds = elapsed;
    if(j.contains("cex"))
      out.cex = counterexample::from_json(j["cex"].dump());
    out.log_text = j.value("log", "");
  }
  catch(...)
  {
    out.row.status = row_status::UNKNOWN;
    out.log_text = "malformed result from engine process\n";
  }
  return out;
}

} // namespace

project_result verify_project(
  const driver_config &cfg,
  const std::string &dir,
  std::ostream &log)
{
  project_result result;

  std::vector<std::string> includes;
  if(!cfg.dep_file.empty())
  {
    std::vector<std::string> warnings;
    includes = parse_dep_file(cfg.dep_file, &warnings);
    for(const auto &w : warnings)
      log << "warning: " << w << "\n";
  }

  std::vector<std::string> files = list_c_files(dir);

  fs::create_directories(cfg.out_dir);
  fs::create_directories(fs::path(cfg.out_dir) / "logs");
  if(cfg.witness)
    fs::create_directories(fs::path(cfg.out_dir) / "witnesses");
  fs::create_directories(fs::path(cfg.out_dir) / "cex");

  for(const auto &file : files)
  {
    log << "[FILE] " << fs::path(file).filename().string() << "\n";

    std::vector<std::string> functions;
    if(!cfg.per_function)
      functions = {"main"};
    else
    {
      try
      {
        source_unit src = load_source_unit(file, includes);
        parsed_unit unit = parse_unit(src);
        for(const auto &fn : unit.unit_functions)
          functions.push_back(fn.name);
      }
      catch(const std::exception &e)
      {
        log << "error: " << e.what() << "\n";
        report_row row;
        row.filename = fs::path(file).filename().string();
        row.function = "(parse)";
        row.status = row_status::UNKNOWN;
        result.rows.push_back(row);
        continue;
      }
    }

    for(const auto &fn : functions)
    {
      log << "[FUNCTION] " << fn << "\n";
      function_job_result job = run_isolated(cfg, file, fn);

      std::string stem = stem_of(file);
      {
        std::ofstream lf(
          fs::path(cfg.out_dir) / "logs" / (stem + "." + fn + ".log"),
          std::ios::binary);
        lf << job.log_text;
      }
      if(job.cex)
      {
        std::ofstream cf(
          fs::path(cfg.out_dir) / "cex" / (stem + "." + fn + ".json"),
          std::ios::binary);
        cf << job.cex->to_json();
        if(cfg.witness)
          write_witness(
            *job.cex,
            (fs::path(cfg.out_dir) / "witnesses" / ("graphML_" + stem + "." + fn))
              .string());
      }

      log << "  " << row_status_name(job.row.status);
      if(job.row.violation_type)
        log << " (" << *job.row.violation_type << " at line "
            << job.row.violated_line.value_or(0) << ")";
      log << " k=" << job.row.k << "\n";

      result.rows.push_back(job.row);
    }
  }

  write_report(result.rows, (fs::path(cfg.out_dir) / "report.csv").string());
  result.summary = summarize(result.rows, static_cast<int>(files.size()));

  bool any_failed = false;
  for(const auto &r : result.rows)
    if(r.status == row_status::FAILED)
      any_failed = true;
  result.exit_code = any_failed ? 1 : 0;
  return result;
}

} // namespace kbmc
