/*******************************************************************\

Module: Verification report

\*******************************************************************/

#ifndef KBMC_DRIVER_REPORT_H
#define KBMC_DRIVER_REPORT_H

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kbmc
{

enum class row_status
{
  SUCCESS,
  FAILED,
  TIMEOUT,
  UNKNOWN
};

const char *row_status_name(row_status s);

struct report_row
{
  std::string filename; // basename of the source file
  std::string function;
  row_status status = row_status::UNKNOWN;
  std::optional<int> violated_line;
  std::optional<std::string> violation_type;
  int k = 0;
  double seconds = 0;

  std::string to_json() const;
  static report_row from_json(const std::string &text);
};

struct run_summary
{
  int files_verified = 0;
  int functions_verified = 0;
  std::map<std::string, int> violations_by_type;
  double total_wall = 0;
};

run_summary summarize(const std::vector<report_row> &rows, int files);

/// CSV with header filename,function,status,line,violation,k,seconds
/// and RFC-4180 quoting.
std::string render_report(const std::vector<report_row> &rows);
void write_report(const std::vector<report_row> &rows, const std::string &path);

} // namespace kbmc

#endif
