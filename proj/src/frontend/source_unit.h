/*******************************************************************\

Module: Source unit handling

\*******************************************************************/

#ifndef KBMC_FRONTEND_SOURCE_UNIT_H
#define KBMC_FRONTEND_SOURCE_UNIT_H

#include <string>
#include <vector>

namespace kbmc
{

/// One .c file plus the include search paths it should be resolved
/// against.
struct source_unit
{
  std::string path;
  std::string text;
  std::vector<std::string> includes; // search directories, in order
};

source_unit load_source_unit(
  const std::string &path, const std::vector<std::string> &includes);

} // namespace kbmc

#endif
