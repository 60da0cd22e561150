/*******************************************************************\

Module: Lexer for the mini-C subset

\*******************************************************************/

#ifndef KBMC_FRONTEND_LEXER_H
#define KBMC_FRONTEND_LEXER_H

#include <cstdint>
#include <string>
#include <vector>

namespace kbmc
{

enum class token_kind
{
  IDENT,
  NUMBER,
  CHAR_LIT,
  PUNCT,
  HASH_INCLUDE, // #include "..." or <...>; text holds the payload
  END
};

struct token
{
  token_kind kind = token_kind::END;
  std::string text;
  std::uint64_t value = 0;
  int line = 1;
  std::size_t offset = 0; // byte offset of the token start
  bool system_include = false;
};

/// Tokenize; throws parse_error on malformed input. Comments (// and
/// /* */) are skipped.
std::vector<token> tokenize(const std::string &text);

} // namespace kbmc

#endif
