#include "driver/listing.h"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "util/errors.h"

namespace fs = std::filesystem;

namespace kbmc
{

std::vector<std::string> list_c_files(const std::string &dir)
{
  std::error_code ec;
  if(!fs::is_directory(dir, ec))
    throw io_error("cannot read directory: " + dir);

  std::vector<std::string> out;
  for(const auto &entry : fs::directory_iterator(dir, ec))
  {
    if(ec)
      throw io_error("cannot read directory: " + dir);
    if(!entry.is_regular_file())
      continue;
    if(entry.path().extension() == ".c")
      out.push_back(entry.path().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> parse_dep_file(
  const std::string &path, std::vector<std::string> *warnings)
{
  std::ifstream in(path);
  if(!in)
    throw io_error("cannot read dependency file: " + path);

  fs::path base = fs::path(path).parent_path();
  std::vector<std::string> out;
  std::string line;
  while(std::getline(in, line))
  {
    // trim
    while(!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
      line.pop_back();
    std::size_t start = 0;
    while(start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
      start++;
    line = line.substr(start);
    if(line.empty())
      continue;

    fs::path p(line);
    if(p.is_relative())
      p = base / p;
    std::error_code ec;
    if(!fs::is_directory(p, ec) && warnings)
      warnings->push_back("dependency path does not exist: " + p.string());
    out.push_back(p.string());
  }
  return out;
}

} // namespace kbmc
