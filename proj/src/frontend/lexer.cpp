#include "frontend/lexer.h"

#include <cctype>

#include "util/errors.h"

namespace kbmc
{

namespace
{

bool is_ident_start(char c)
{
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// multi-char punctuators, longest first
const char *const puncts[] = {
  "<<=", ">>=", "->", "<<", ">>", "<=", ">=", "==", "!=", "&&", "||",
  "+=",  "-=",  "*=", "/=", "%=", "&=", "|=", "^=", "++", "--", nullptr};

} // namespace

std::vector<token> tokenize(const std::string &text)
{
  std::vector<token> out;
  std::size_t i = 0;
  int line = 1;
  const std::size_t n = text.size();

  auto peek = [&](std::size_t k) -> char { return i + k < n ? text[i + k] : '\0'; };

  while(i < n)
  {
    char c = text[i];
    if(c == '\n')
    {
      line++;
      i++;
      continue;
    }
    if(std::isspace(static_cast<unsigned char>(c)))
    {
      i++;
      continue;
    }
    if(c == '/' && peek(1) == '/')
    {
      while(i < n && text[i] != '\n')
        i++;
      continue;
    }
    if(c == '/' && peek(1) == '*')
    {
      i += 2;
      while(i + 1 < n && !(text[i] == '*' && text[i + 1] == '/'))
      {
        if(text[i] == '\n')
          line++;
        i++;
      }
      if(i + 1 >= n)
        throw parse_error(line, "unterminated comment");
      i += 2;
      continue;
    }
    if(c == '#')
    {
      // only #include is recognized
      std::size_t start = i;
      int start_line = line;
      i++;
      while(i < n && std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '\n')
        i++;
      std::size_t kw = i;
      while(i < n && is_ident_char(text[i]))
        i++;
      std::string word = text.substr(kw, i - kw);
      if(word != "include")
        throw parse_error(start_line, "unsupported preprocessor directive #" + word);
      while(i < n && std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '\n')
        i++;
      if(i >= n || (text[i] != '"' && text[i] != '<'))
        throw parse_error(start_line, "malformed #include");
      char close = text[i] == '"' ? '"' : '>';
      bool system = text[i] == '<';
      i++;
      std::size_t name_start = i;
      while(i < n && text[i] != close && text[i] != '\n')
        i++;
      if(i >= n || text[i] != close)
        throw parse_error(start_line, "malformed #include");
      token t;
      t.kind = token_kind::HASH_INCLUDE;
      t.text = text.substr(name_start, i - name_start);
      t.line = start_line;
      t.offset = start;
      t.system_include = system;
      out.push_back(std::move(t));
      i++;
      continue;
    }
    if(is_ident_start(c))
    {
      std::size_t start = i;
      while(i < n && is_ident_char(text[i]))
        i++;
      token t;
      t.kind = token_kind::IDENT;
      t.text = text.substr(start, i - start);
      t.line = line;
      t.offset = start;
      out.push_back(std::move(t));
      continue;
    }
    if(std::isdigit(static_cast<unsigned char>(c)))
    {
      std::size_t start = i;
      std::uint64_t value = 0;
      if(c == '0' && (peek(1) == 'x' || peek(1) == 'X'))
      {
        i += 2;
        if(i >= n || !std::isxdigit(static_cast<unsigned char>(text[i])))
          throw parse_error(line, "malformed hex literal");
        while(i < n && std::isxdigit(static_cast<unsigned char>(text[i])))
        {
          char d = text[i];
          std::uint64_t dv = std::isdigit(static_cast<unsigned char>(d))
            ? d - '0'
            : 10 + (std::tolower(d) - 'a');
          value = value * 16 + dv;
          i++;
        }
      }
      else
      {
        while(i < n && std::isdigit(static_cast<unsigned char>(text[i])))
        {
          value = value * 10 + (text[i] - '0');
          i++;
        }
      }
      // unsigned suffixes are tolerated and ignored
      while(i < n && (text[i] == 'u' || text[i] == 'U' || text[i] == 'l' || text[i] == 'L'))
        i++;
      token t;
      t.kind = token_kind::NUMBER;
      t.text = text.substr(start, i - start);
      t.value = value;
      t.line = line;
      t.offset = start;
      out.push_back(std::move(t));
      continue;
    }
    if(c == '\'')
    {
      std::size_t start = i;
      i++;
      if(i >= n)
        throw parse_error(line, "unterminated character literal");
      std::uint64_t value;
      if(text[i] == '\\')
      {
        i++;
        if(i >= n)
          throw parse_error(line, "unterminated character literal");
        switch(text[i])
        {
        case 'n': value = '\n'; break;
        case 't': value = '\t'; break;
        case '0': value = 0; break;
        case '\\': value = '\\'; break;
        case '\'': value = '\''; break;
        default:
          throw parse_error(line, "unknown escape in character literal");
        }
        i++;
      }
      else
      {
        value = static_cast<unsigned char>(text[i]);
        i++;
      }
      if(i >= n || text[i] != '\'')
        throw parse_error(line, "unterminated character literal");
      i++;
      token t;
      t.kind = token_kind::CHAR_LIT;
      t.text = text.substr(start, i - start);
      t.value = value;
      t.line = line;
      t.offset = start;
      out.push_back(std::move(t));
      continue;
    }

    // punctuators
    {
      token t;
      t.kind = token_kind::PUNCT;
      t.line = line;
      t.offset = i;
      bool matched = false;
      for(const char *const *p = puncts; *p; p++)
      {
        std::size_t len = std::string(*p).size();
        if(text.compare(i, len, *p) == 0)
        {
          t.text = *p;
          i += len;
          matched = true;
          break;
        }
      }
      if(!matched)
      {
        static const std::string singles = "+-*/%<>=!&|^~(){}[];,.?:";
        if(singles.find(c) == std::string::npos)
          throw parse_error(line, std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
        i++;
      }
      out.push_back(std::move(t));
      continue;
    }
  }

  token end;
  end.kind = token_kind::END;
  end.line = line;
  end.offset = n;
  out.push_back(end);
  return out;
}

} // namespace kbmc
