/*******************************************************************\

Module: Error types

\*******************************************************************/

#ifndef KBMC_UTIL_ERRORS_H
#define KBMC_UTIL_ERRORS_H

#include <stdexcept>
#include <string>

namespace kbmc
{

struct parse_error : std::runtime_error
{
  int line;
  parse_error(int line_, const std::string &msg)
    : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
      line(line_)
  {
  }
};

struct include_not_found : std::runtime_error
{
  std::string name;
  explicit include_not_found(const std::string &name_)
    : std::runtime_error("include not found: " + name_), name(name_)
  {
  }
};

struct type_error : std::runtime_error
{
  int line;
  type_error(int line_, const std::string &msg)
    : std::runtime_error("line " + std::to_string(line_) + ": " + msg),
      line(line_)
  {
  }
};

struct unsupported_construct : std::runtime_error
{
  int line;
  unsupported_construct(int line_, const std::string &msg)
    : std::runtime_error(
        "line " + std::to_string(line_) + ": unsupported: " + msg),
      line(line_)
  {
  }
};

struct unwind_overflow : std::runtime_error
{
  unwind_overflow() : std::runtime_error("symbolic execution step budget exceeded")
  {
  }
};

struct encoding_error : std::runtime_error
{
  explicit encoding_error(const std::string &msg)
    : std::runtime_error("encoding: " + msg)
  {
  }
};

struct backend_unavailable : std::runtime_error
{
  explicit backend_unavailable(const std::string &msg)
    : std::runtime_error("solver backend unavailable: " + msg)
  {
  }
};

struct model_gap : std::runtime_error
{
  explicit model_gap(const std::string &symbol)
    : std::runtime_error("model has no value for " + symbol)
  {
  }
};

struct missing_assignment : std::runtime_error
{
  explicit missing_assignment(const std::string &symbol)
    : std::runtime_error("counterexample has no value for " + symbol)
  {
  }
};

struct io_error : std::runtime_error
{
  explicit io_error(const std::string &msg) : std::runtime_error(msg)
  {
  }
};

struct budget_exceeded : std::runtime_error
{
  explicit budget_exceeded(const std::string &msg) : std::runtime_error(msg)
  {
  }
};

} // namespace kbmc

#endif
