/*******************************************************************\

Module: Recursive-descent parser for the mini-C subset

\*******************************************************************/

#ifndef KBMC_FRONTEND_PARSER_H
#define KBMC_FRONTEND_PARSER_H

#include "frontend/ast.h"
#include "frontend/source_unit.h"

namespace kbmc
{

/// Parse a unit and everything it includes. Throws parse_error,
/// include_not_found or unsupported_construct. The grammar is the one
/// published in docs/language.md.
parsed_unit parse_unit(const source_unit &src);

/// Convenience for tests: parse a bare string with no includes.
parsed_unit parse_string(const std::string &text, const std::string &path = "test.c");

} // namespace kbmc

#endif
