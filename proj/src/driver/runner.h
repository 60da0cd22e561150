/*******************************************************************\

Module: Whole-project verification driver

\*******************************************************************/

#ifndef KBMC_DRIVER_RUNNER_H
#define KBMC_DRIVER_RUNNER_H

#include <iosfwd>
#include <string>
#include <vector>

#include "driver/report.h"
#include "kinduction/engine.h"

namespace kbmc
{

/// Mirrors the command line: -m -u -nu -ib -p -o -t -i -k -w -f plus
/// the backend selection and output directory.
struct driver_config
{
  bool memory_leaks = false;           // -m
  int unwind = 10;                     // -u (single-shot BMC bound)
  bool no_unwinding_assertions = false; // -nu
  bool incremental = false;            // -ib
  bool no_pointer_check = false;       // -p
  bool overflow = false;               // -o
  double timeout_seconds = 0;          // -t
  std::string dep_file;                // -i
  bool parallel_kinduction = false;    // -k
  bool witness = false;                // -w
  bool per_function = false;           // -f
  int max_k = 50;                      // --max-k
  backend_selector backend;            // --backend / --solver
  std::string out_dir = "kbmc-out";    // --out

  property_config to_property_config() const;
};

struct project_result
{
  std::vector<report_row> rows;
  run_summary summary;
  int exit_code = 0; // 0 no failures, 1 some FAILED, 2 driver error
};

/// Alg. 4 driver: list the *.c files, list each file's functions (or
/// just main), verify every function in an isolated child process under
/// the per-function timeout, and emit report.csv, logs, counterexamples
/// and witnesses under out_dir.
project_result verify_project(
  const driver_config &cfg,
  const std::string &dir,
  std::ostream &log);

/// One function of one file, in-process (the child side of the driver;
/// also handy for tests).
struct function_job_result
{
  report_row row;
  std::optional<counterexample> cex;
  std::string log_text;
};

function_job_result run_function_job(
  const driver_config &cfg,
  const std::string &file,
  const std::string &function);

} // namespace kbmc

#endif
