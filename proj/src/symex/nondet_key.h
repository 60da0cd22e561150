/*******************************************************************\

Module: Stable nondet-instance and heap-object keys

\*******************************************************************/

// Symbolic execution and concrete replay must mint identical names for
// the same dynamic event (a havoc, an indeterminate declaration, a
// malloc'd cell). The key encodes the inline chain, the loop-iteration
// counters of every enclosing loop and the instruction index, e.g.
//   main.L4#2.I7           second iteration of the loop headed at 4
//   main.I3.C/f.I1         inside f inlined at call site 3
// Heap object identities are a 32-bit FNV hash of that key.

#ifndef KBMC_SYMEX_NONDET_KEY_H
#define KBMC_SYMEX_NONDET_KEY_H

#include <cstdint>
#include <string>

namespace kbmc
{

std::uint32_t object_key_from_string(const std::string &s);

} // namespace kbmc

#endif
