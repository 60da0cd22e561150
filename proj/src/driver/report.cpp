#include "driver/report.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "util/errors.h"

namespace kbmc
{

const char *row_status_name(row_status s)
{
  switch(s)
  {
  case row_status::SUCCESS: return "SUCCESS";
  case row_status::FAILED: return "FAILED";
  case row_status::TIMEOUT: return "TIMEOUT";
  case row_status::UNKNOWN: return "UNKNOWN";
  }
  return "?";
}

std::string report_row::to_json() const
{
  nlohmann::json j;
  j["filename"] = filename;
  j["function"] = function;
  j["status"] = row_status_name(status);
  if(violated_line)
    j["line"] = *violated_line;
  if(violation_type)
    j["violation"] = *violation_type;
  j["k"] = k;
  j["seconds"] = seconds;
  return j.dump();
}

report_row report_row::from_json(const std::string &text)
{
  nlohmann::json j = nlohmann::json::parse(text);
  report_row r;
  r.filename = j.value("filename", "");
  r.function = j.value("function", "");
  std::string s = j.value("status", "UNKNOWN");
  r.status = s == "SUCCESS" ? row_status::SUCCESS
           : s == "FAILED" ? row_status::FAILED
           : s == "TIMEOUT" ? row_status::TIMEOUT
                            : row_status::UNKNOWN;
  if(j.contains("line"))
    r.violated_line = j["line"].get<int>();
  if(j.contains("violation"))
    r.violation_type = j["violation"].get<std::string>();
  r.k = j.value("k", 0);
  r.seconds = j.value("seconds", 0.0);
  return r;
}

run_summary summarize(const std::vector<report_row> &rows, int files)
{
  run_summary s;
  s.files_verified = files;
  s.functions_verified = static_cast<int>(rows.size());
  for(const auto &r : rows)
  {
    s.total_wall += r.seconds;
    if(r.status == row_status::FAILED && r.violation_type)
      s.violations_by_type[*r.violation_type]++;
  }
  return s;
}

namespace
{

std::string csv_quote(const std::string &field)
{
  bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
  if(!needs)
    return field;
  std::string out = "\"";
  for(char c : field)
  {
    if(c == '"')
      out += "\"\"";
    else
      out += c;
  }
  out += "\"";
  return out;
}

std::string seconds_text(double s)
{
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(3);
  os << s;
  return os.str();
}

} // namespace

std::string render_report(const std::vector<report_row> &rows)
{
  std::ostringstream os;
  os << "filename,function,status,line,violation,k,seconds\r\n";
  for(const auto &r : rows)
  {
    os << csv_quote(r.filename) << ',' << csv_quote(r.function) << ','
       << row_status_name(r.status) << ','
       << (r.violated_line ? std::to_string(*r.violated_line) : std::string())
       << ',' << csv_quote(r.violation_type.value_or("")) << ','
       << r.k << ',' << seconds_text(r.seconds) << "\r\n";
  }
  return os.str();
}

void write_report(const std::vector<report_row> &rows, const std::string &path)
{
  std::ofstream out(path, std::ios::binary);
  if(!out)
    throw io_error("cannot write report: " + path);
  out << render_report(rows);
}

} // namespace kbmc
