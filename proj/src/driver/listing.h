/*******************************************************************\

Module: Project file and dependency listing

\*******************************************************************/

#ifndef KBMC_DRIVER_LISTING_H
#define KBMC_DRIVER_LISTING_H

#include <string>
#include <vector>

namespace kbmc
{

/// All regular *.c files directly inside dir (non-recursive), sorted
/// lexicographically. Throws io_error when the directory cannot be
/// read.
std::vector<std::string> list_c_files(const std::string &dir);

/// One include path per non-blank line; relative paths resolve against
/// the dependency file's own directory. Nonexistent paths produce
/// warnings, not errors.
std::vector<std::string> parse_dep_file(
  const std::string &path, std::vector<std::string> *warnings = nullptr);

} // namespace kbmc

#endif
