#include "symex/nondet_key.h"

#include "util/expr.h"

namespace kbmc
{

// FNV-1a; the reserved NULL/INVALID bit patterns are remapped to fixed
// alternatives. Collisions are detected by the callers.
std::uint32_t object_key_from_string(const std::string &s)
{
  std::uint32_t h = 2166136261u;
  for(unsigned char c : s)
  {
    h ^= c;
    h *= 16777619u;
  }
  if(h == OBJ_NULL)
    h = 0x9E3779B9u;
  if(h == OBJ_INVALID)
    h = 0x61C88647u;
  return h;
}

} // namespace kbmc
