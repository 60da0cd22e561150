#include "frontend/parser.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "frontend/lexer.h"
#include "util/errors.h"

namespace fs = std::filesystem;

namespace kbmc
{

// AST member-access conventions (see ast.h): a CORE node with
// core==DEREF and an empty field is *p; with arrow=true and a field it
// is p->f; with arrow=false and a field it is x.f. The type checker
// resolves fields to indices and flattens local struct members.

namespace
{

struct include_context
{
  std::vector<std::string> search_paths;
  std::set<std::string> visited; // canonical paths already parsed
  std::vector<std::string> *warnings = nullptr;
  int depth = 0;
};

void parse_file_into(
  const std::string &path,
  const std::string &text,
  parsed_unit &out,
  include_context &ctx,
  bool is_unit_file);

class parser
{
public:
  parser(
    const std::string &path,
    const std::string &text,
    parsed_unit &out,
    include_context &ctx,
    bool is_unit_file)
    : path_(path),
      text_(text),
      tokens_(tokenize(text)),
      out_(out),
      ctx_(ctx),
      is_unit_file_(is_unit_file)
  {
  }

  void run()
  {
    while(!at_end())
    {
      if(cur().kind == token_kind::HASH_INCLUDE)
      {
        handle_include(cur());
        advance();
        continue;
      }
      if(cur().kind == token_kind::IDENT && cur().text == "struct" &&
         peek(2).text == "{")
      {
        parse_struct_def();
        continue;
      }
      parse_function();
    }
  }

private:
  const std::string &path_;
  const std::string &text_;
  std::vector<token> tokens_;
  std::size_t pos_ = 0;
  parsed_unit &out_;
  include_context &ctx_;
  bool is_unit_file_;

  const token &cur() const { return tokens_[pos_]; }
  const token &peek(std::size_t k = 1) const
  {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  bool at_end() const { return cur().kind == token_kind::END; }
  void advance() { if(!at_end()) pos_++; }

  bool is_punct(const std::string &p) const
  {
    return cur().kind == token_kind::PUNCT && cur().text == p;
  }
  bool is_ident(const std::string &w) const
  {
    return cur().kind == token_kind::IDENT && cur().text == w;
  }

  void expect_punct(const std::string &p)
  {
    if(!is_punct(p))
      throw parse_error(cur().line, "expected '" + p + "', got '" + cur().text + "'");
    advance();
  }

  std::string expect_ident()
  {
    if(cur().kind != token_kind::IDENT)
      throw parse_error(cur().line, "expected identifier, got '" + cur().text + "'");
    std::string s = cur().text;
    advance();
    return s;
  }

  void handle_include(const token &t)
  {
    if(t.system_include)
    {
      if(ctx_.warnings)
        ctx_.warnings->push_back(
          "ignoring system include <" + t.text + "> in " + path_);
      return;
    }
    if(ctx_.depth > 16)
      throw parse_error(t.line, "include nesting too deep");
    // unit's own directory first, then the configured search paths
    std::vector<std::string> dirs;
    dirs.push_back(fs::path(path_).parent_path().string());
    for(const auto &d : ctx_.search_paths)
      dirs.push_back(d);
    for(const auto &d : dirs)
    {
      fs::path candidate = d.empty() ? fs::path(t.text) : fs::path(d) / t.text;
      std::error_code ec;
      if(fs::is_regular_file(candidate, ec))
      {
        std::string canon = fs::weakly_canonical(candidate, ec).string();
        if(ctx_.visited.count(canon))
          return;
        ctx_.visited.insert(canon);
        std::ifstream in(candidate);
        std::stringstream ss;
        ss << in.rdbuf();
        ctx_.depth++;
        parse_file_into(candidate.string(), ss.str(), out_, ctx_, false);
        ctx_.depth--;
        return;
      }
    }
    throw include_not_found(t.text);
  }

  // ---- types ----

  bool looks_like_type() const
  {
    if(cur().kind != token_kind::IDENT)
      return false;
    static const std::set<std::string> kw = {
      "void", "int",      "unsigned", "signed", "char",    "short",
      "long", "bool",     "_Bool",    "struct", "int8_t",  "uint8_t",
      "int16_t", "uint16_t", "int32_t", "uint32_t", "int64_t", "uint64_t"};
    return kw.count(cur().text) > 0;
  }

  typet parse_base_type()
  {
    int line = cur().line;
    std::string w = expect_ident();
    typet t;
    if(w == "void")
      t = nullptr; // only valid as a return type
    else if(w == "bool" || w == "_Bool")
      t = ty::boolean();
    else if(w == "char")
      t = ty::sint(8);
    else if(w == "short")
      t = ty::sint(16);
    else if(w == "int")
      t = ty::sint(32);
    else if(w == "long")
      t = ty::sint(64);
    else if(w == "signed")
    {
      if(is_ident("char")) { advance(); t = ty::sint(8); }
      else if(is_ident("short")) { advance(); t = ty::sint(16); }
      else if(is_ident("long")) { advance(); t = ty::sint(64); }
      else { if(is_ident("int")) advance(); t = ty::sint(32); }
    }
    else if(w == "unsigned")
    {
      if(is_ident("char")) { advance(); t = ty::uint(8); }
      else if(is_ident("short")) { advance(); t = ty::uint(16); }
      else if(is_ident("long")) { advance(); t = ty::uint(64); }
      else { if(is_ident("int")) advance(); t = ty::uint(32); }
    }
    else if(w == "int8_t") t = ty::sint(8);
    else if(w == "uint8_t") t = ty::uint(8);
    else if(w == "int16_t") t = ty::sint(16);
    else if(w == "uint16_t") t = ty::uint(16);
    else if(w == "int32_t") t = ty::sint(32);
    else if(w == "uint32_t") t = ty::uint(32);
    else if(w == "int64_t") t = ty::sint(64);
    else if(w == "uint64_t") t = ty::uint(64);
    else if(w == "struct")
    {
      std::string name = expect_ident();
      t = ty::struct_ref(name);
    }
    else
      throw parse_error(line, "expected type, got '" + w + "'");

    while(is_punct("*"))
    {
      advance();
      if(!t)
        throw parse_error(line, "pointer to void is not supported");
      t = ty::pointer(t);
    }
    // "short int" / "long int" tails
    if(t && is_ident("int") && (w == "short" || w == "long"))
      advance();
    return t;
  }

  void parse_struct_def()
  {
    int line = cur().line;
    advance(); // struct
    std::string name = expect_ident();
    expect_punct("{");
    struct_def def;
    def.name = name;
    while(!is_punct("}"))
    {
      typet ft = parse_base_type();
      if(!ft)
        throw parse_error(cur().line, "void struct field");
      std::string fname = expect_ident();
      if(is_punct("["))
        throw unsupported_construct(cur().line, "array field in struct");
      expect_punct(";");
      if(ft->is_struct())
        throw unsupported_construct(line, "nested struct field");
      def.fields.push_back({fname, ft});
    }
    expect_punct("}");
    expect_punct(";");
    if(out_.structs.find(name))
      throw parse_error(line, "duplicate struct '" + name + "'");
    out_.structs.defs.push_back(std::move(def));
  }

  // ---- functions ----

  void parse_function()
  {
    if(!looks_like_type())
      throw parse_error(cur().line, "expected declaration, got '" + cur().text + "'");
    int line = cur().line;
    typet ret = parse_base_type();
    std::string name = expect_ident();
    if(!is_punct("("))
      throw unsupported_construct(line, "global variable");
    advance();
    function_decl fn;
    fn.name = name;
    fn.return_type = ret;
    fn.decl_line = line;
    fn.file = path_;
    if(is_ident("void") && peek(1).text == ")")
      advance();
    while(!is_punct(")"))
    {
      typet pt = parse_base_type();
      if(!pt)
        throw parse_error(cur().line, "void parameter");
      std::string pname = expect_ident();
      if(is_punct("["))
        throw unsupported_construct(cur().line, "array parameter");
      fn.params.push_back({pname, pt});
      if(is_punct(","))
        advance();
      else if(!is_punct(")"))
        throw parse_error(cur().line, "expected ',' or ')'");
    }
    advance(); // )
    if(is_punct(";"))
      throw unsupported_construct(line, "function prototype without body");
    expect_punct("{");
    while(!is_punct("}"))
      fn.body.push_back(parse_statement());
    advance(); // }

    for(const auto &existing :
        is_unit_file_ ? out_.unit_functions : out_.include_functions)
      if(existing.name == fn.name)
        throw parse_error(line, "duplicate function '" + fn.name + "'");
    if(is_unit_file_)
      out_.unit_functions.push_back(std::move(fn));
    else
      out_.include_functions.push_back(std::move(fn));
  }

  // ---- statements ----

  std::vector<stmtt> parse_body()
  {
    std::vector<stmtt> body;
    if(is_punct("{"))
    {
      advance();
      while(!is_punct("}"))
        body.push_back(parse_statement());
      advance();
    }
    else
      body.push_back(parse_statement());
    return body;
  }

  stmtt parse_statement()
  {
    int line = cur().line;
    auto st = std::make_shared<statement>();
    st->line = line;

    if(is_ident("if"))
    {
      st->kind = stmt_kind::IF;
      advance();
      expect_punct("(");
      auto [cond, text] = parse_expression_with_text();
      st->value = cond;
      st->text = text;
      expect_punct(")");
      st->body = parse_body();
      if(is_ident("else"))
      {
        advance();
        st->else_body = parse_body();
      }
      return st;
    }
    if(is_ident("while"))
    {
      st->kind = stmt_kind::WHILE;
      advance();
      expect_punct("(");
      auto [cond, text] = parse_expression_with_text();
      st->value = cond;
      st->text = text;
      expect_punct(")");
      st->body = parse_body();
      return st;
    }
    if(is_ident("for"))
    {
      st->kind = stmt_kind::FOR;
      advance();
      expect_punct("(");
      if(!is_punct(";"))
        st->init = parse_simple_statement();
      else
        advance();
      if(!is_punct(";"))
      {
        auto [cond, text] = parse_expression_with_text();
        st->value = cond;
        st->text = text;
      }
      expect_punct(";");
      if(!is_punct(")"))
        st->step = parse_assign_like(/*consume_semi=*/false);
      expect_punct(")");
      st->body = parse_body();
      return st;
    }
    if(is_ident("return"))
    {
      st->kind = stmt_kind::RETURN;
      advance();
      if(!is_punct(";"))
        st->value = parse_expression();
      expect_punct(";");
      return st;
    }
    if(is_ident("assert") || is_ident("assume"))
    {
      st->kind = cur().text == "assert" ? stmt_kind::ASSERT_ : stmt_kind::ASSUME;
      advance();
      expect_punct("(");
      auto [e, text] = parse_expression_with_text();
      st->value = e;
      st->text = text;
      expect_punct(")");
      expect_punct(";");
      return st;
    }
    if(is_ident("free"))
    {
      st->kind = stmt_kind::FREE;
      advance();
      expect_punct("(");
      st->value = parse_expression();
      expect_punct(")");
      expect_punct(";");
      return st;
    }
    if(is_ident("break") || is_ident("continue") || is_ident("goto") ||
       is_ident("do") || is_ident("switch"))
      throw unsupported_construct(line, "'" + cur().text + "' statement");

    return parse_simple_statement();
  }

  // declaration or assignment/expression statement, consuming ';'
  stmtt parse_simple_statement()
  {
    if(looks_like_type())
      return parse_declaration();
    return parse_assign_like(/*consume_semi=*/true);
  }

  stmtt parse_declaration()
  {
    int line = cur().line;
    auto st = std::make_shared<statement>();
    st->line = line;
    st->kind = stmt_kind::DECL;
    typet t = parse_base_type();
    if(!t)
      throw parse_error(line, "void variable");
    st->name = expect_ident();
    if(is_punct("["))
    {
      advance();
      if(cur().kind != token_kind::NUMBER)
        throw parse_error(cur().line, "array length must be a literal");
      std::int64_t len = static_cast<std::int64_t>(cur().value);
      if(len < 1)
        throw parse_error(cur().line, "array length must be >= 1");
      advance();
      expect_punct("]");
      t = ty::array(t, len);
    }
    st->decl_type = t;
    if(is_punct("="))
    {
      advance();
      st->value = parse_expression();
    }
    expect_punct(";");
    return st;
  }

  // assignment, compound assignment, increment, or call statement
  stmtt parse_assign_like(bool consume_semi)
  {
    int line = cur().line;
    auto st = std::make_shared<statement>();
    st->line = line;

    // prefix increment/decrement as a statement
    if(is_punct("++") || is_punct("--"))
    {
      bool inc = cur().text == "++";
      advance();
      ast_exprt lv = parse_unary();
      st->kind = stmt_kind::ASSIGN;
      st->lhs = lv;
      st->value = make_incdec(lv, inc, line);
      if(consume_semi)
        expect_punct(";");
      return st;
    }

    ast_exprt e = parse_expression();

    if(is_punct("++") || is_punct("--"))
    {
      bool inc = cur().text == "++";
      advance();
      st->kind = stmt_kind::ASSIGN;
      st->lhs = e;
      st->value = make_incdec(e, inc, line);
      if(consume_semi)
        expect_punct(";");
      return st;
    }

    static const std::set<std::string> compound = {
      "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="};
    if(cur().kind == token_kind::PUNCT && compound.count(cur().text))
    {
      std::string op = cur().text;
      advance();
      ast_exprt rhs = parse_expression();
      auto bin = std::make_shared<ast_expr>();
      bin->kind = ast_expr_kind::CORE;
      bin->core = expr_kind::BINARY;
      bin->line = line;
      bin->bop = op == "+=" ? binary_op::ADD
               : op == "-=" ? binary_op::SUB
               : op == "*=" ? binary_op::MUL
               : op == "/=" ? binary_op::DIV
               : op == "%=" ? binary_op::REM
               : op == "&=" ? binary_op::BIT_AND
               : op == "|=" ? binary_op::BIT_OR
               : op == "^=" ? binary_op::BIT_XOR
               : op == "<<=" ? binary_op::SHL
                             : binary_op::SHR;
      bin->args = {e, rhs};
      st->kind = stmt_kind::ASSIGN;
      st->lhs = e;
      st->value = bin;
      if(consume_semi)
        expect_punct(";");
      return st;
    }

    if(is_punct("="))
    {
      advance();
      st->kind = stmt_kind::ASSIGN;
      st->lhs = e;
      st->value = parse_expression();
      if(consume_semi)
        expect_punct(";");
      return st;
    }

    // bare expression statement; only calls make sense
    st->kind = stmt_kind::EXPR;
    st->value = e;
    if(consume_semi)
      expect_punct(";");
    return st;
  }

  ast_exprt make_incdec(const ast_exprt &lv, bool inc, int line)
  {
    auto one = std::make_shared<ast_expr>();
    one->kind = ast_expr_kind::CORE;
    one->core = expr_kind::CONSTANT;
    one->bits = 1;
    one->type = ty::sint(32);
    one->line = line;
    auto bin = std::make_shared<ast_expr>();
    bin->kind = ast_expr_kind::CORE;
    bin->core = expr_kind::BINARY;
    bin->bop = inc ? binary_op::ADD : binary_op::SUB;
    bin->args = {lv, one};
    bin->line = line;
    return bin;
  }

  // ---- expressions ----

  std::pair<ast_exprt, std::string> parse_expression_with_text()
  {
    std::size_t start = cur().offset;
    ast_exprt e = parse_expression();
    std::size_t end = cur().offset;
    std::string text = text_.substr(start, end - start);
    // trim
    while(!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
      text.pop_back();
    while(!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
      text.erase(text.begin());
    e->text = text;
    return {e, text};
  }

  ast_exprt parse_expression() { return parse_binary(0); }

  struct level
  {
    std::vector<std::pair<std::string, binary_op>> ops;
  };

  static const std::vector<level> &precedence()
  {
    static const std::vector<level> levels = {
      {{{"||", binary_op::LOG_OR}}},
      {{{"&&", binary_op::LOG_AND}}},
      {{{"|", binary_op::BIT_OR}}},
      {{{"^", binary_op::BIT_XOR}}},
      {{{"&", binary_op::BIT_AND}}},
      {{{"==", binary_op::EQ}, {"!=", binary_op::NE}}},
      {{{"<", binary_op::LT},
        {"<=", binary_op::LE},
        {">", binary_op::GT},
        {">=", binary_op::GE}}},
      {{{"<<", binary_op::SHL}, {">>", binary_op::SHR}}},
      {{{"+", binary_op::ADD}, {"-", binary_op::SUB}}},
      {{{"*", binary_op::MUL}, {"/", binary_op::DIV}, {"%", binary_op::REM}}},
    };
    return levels;
  }

  ast_exprt parse_binary(std::size_t lvl)
  {
    if(lvl >= precedence().size())
      return parse_unary();
    ast_exprt lhs = parse_binary(lvl + 1);
    for(;;)
    {
      const binary_op *matched = nullptr;
      for(const auto &[p, op] : precedence()[lvl].ops)
        if(is_punct(p))
        {
          matched = &op;
          break;
        }
      if(!matched)
        return lhs;
      int line = cur().line;
      advance();
      ast_exprt rhs = parse_binary(lvl + 1);
      auto n = std::make_shared<ast_expr>();
      n->kind = ast_expr_kind::CORE;
      n->core = expr_kind::BINARY;
      n->bop = *matched;
      n->args = {lhs, rhs};
      n->line = line;
      lhs = n;
    }
  }

  ast_exprt parse_unary()
  {
    int line = cur().line;
    if(is_punct("-") || is_punct("!") || is_punct("~"))
    {
      unary_op op = cur().text == "-" ? unary_op::NEG
                  : cur().text == "!" ? unary_op::LOG_NOT
                                      : unary_op::BIT_NOT;
      advance();
      auto n = std::make_shared<ast_expr>();
      n->kind = ast_expr_kind::CORE;
      n->core = expr_kind::UNARY;
      n->uop = op;
      n->args = {parse_unary()};
      n->line = line;
      return n;
    }
    if(is_punct("*"))
    {
      advance();
      auto n = std::make_shared<ast_expr>();
      n->kind = ast_expr_kind::CORE;
      n->core = expr_kind::DEREF;
      n->args = {parse_unary()};
      n->line = line;
      return n;
    }
    if(is_punct("&"))
      throw unsupported_construct(line, "address-of operator");
    // cast: '(' type ')' unary
    if(is_punct("(") && peek(1).kind == token_kind::IDENT)
    {
      static const std::set<std::string> type_kw = {
        "int", "unsigned", "signed", "char",    "short",   "long",
        "bool", "_Bool",   "struct", "int8_t",  "uint8_t", "int16_t",
        "uint16_t", "int32_t", "uint32_t", "int64_t", "uint64_t"};
      if(type_kw.count(peek(1).text))
      {
        advance();
        typet t = parse_base_type();
        expect_punct(")");
        auto n = std::make_shared<ast_expr>();
        n->kind = ast_expr_kind::CORE;
        n->core = expr_kind::CAST;
        n->type = t;
        n->args = {parse_unary()};
        n->line = line;
        return n;
      }
    }
    return parse_postfix();
  }

  ast_exprt parse_postfix()
  {
    ast_exprt e = parse_primary();
    for(;;)
    {
      int line = cur().line;
      if(is_punct("["))
      {
        advance();
        ast_exprt idx = parse_expression();
        expect_punct("]");
        auto n = std::make_shared<ast_expr>();
        n->kind = ast_expr_kind::CORE;
        n->core = expr_kind::INDEX;
        n->args = {e, idx};
        n->line = line;
        e = n;
        continue;
      }
      if(is_punct(".") || is_punct("->"))
      {
        bool arrow = cur().text == "->";
        advance();
        std::string field = expect_ident();
        auto n = std::make_shared<ast_expr>();
        n->kind = ast_expr_kind::CORE;
        n->core = expr_kind::DEREF;
        n->field = field;
        n->arrow = arrow;
        n->args = {e};
        n->line = line;
        e = n;
        continue;
      }
      return e;
    }
  }

  ast_exprt parse_primary()
  {
    int line = cur().line;
    auto n = std::make_shared<ast_expr>();
    n->line = line;

    if(cur().kind == token_kind::NUMBER || cur().kind == token_kind::CHAR_LIT)
    {
      n->kind = ast_expr_kind::CORE;
      n->core = expr_kind::CONSTANT;
      n->bits = cur().value;
      n->type = cur().value <= 0x7FFFFFFFull ? ty::sint(32) : ty::sint(64);
      advance();
      return n;
    }
    if(is_punct("("))
    {
      advance();
      ast_exprt e = parse_expression();
      expect_punct(")");
      return e;
    }
    if(cur().kind != token_kind::IDENT)
      throw parse_error(line, "expected expression, got '" + cur().text + "'");

    std::string name = cur().text;

    if(name == "true" || name == "false")
    {
      advance();
      n->kind = ast_expr_kind::CORE;
      n->core = expr_kind::CONSTANT;
      n->bits = name == "true" ? 1 : 0;
      n->type = ty::boolean();
      return n;
    }
    if(name == "NULL")
    {
      advance();
      n->kind = ast_expr_kind::CORE;
      n->core = expr_kind::CONSTANT;
      n->bits = 0;
      n->type = nullptr; // resolved against context by the type checker
      n->symbol = "NULL";
      return n;
    }
    if(name == "sizeof")
    {
      advance();
      expect_punct("(");
      typet t = parse_base_type();
      expect_punct(")");
      n->kind = ast_expr_kind::SIZEOF;
      n->type = t;
      return n;
    }
    if(name == "malloc")
    {
      advance();
      expect_punct("(");
      ast_exprt size = parse_expression();
      expect_punct(")");
      n->kind = ast_expr_kind::MALLOC;
      n->args = {size};
      return n;
    }
    if(name.rfind("nondet_", 0) == 0)
    {
      advance();
      expect_punct("(");
      expect_punct(")");
      n->kind = ast_expr_kind::NONDET;
      std::string suffix = name.substr(7);
      if(suffix == "bool") n->type = ty::boolean();
      else if(suffix == "char") n->type = ty::sint(8);
      else if(suffix == "uchar") n->type = ty::uint(8);
      else if(suffix == "short") n->type = ty::sint(16);
      else if(suffix == "ushort") n->type = ty::uint(16);
      else if(suffix == "int") n->type = ty::sint(32);
      else if(suffix == "uint") n->type = ty::uint(32);
      else if(suffix == "long") n->type = ty::sint(64);
      else if(suffix == "ulong") n->type = ty::uint(64);
      else
        throw parse_error(line, "unknown intrinsic '" + name + "'");
      return n;
    }

    advance();
    if(is_punct("("))
    {
      advance();
      n->kind = ast_expr_kind::CALL;
      n->symbol = name;
      while(!is_punct(")"))
      {
        n->args.push_back(parse_expression());
        if(is_punct(","))
          advance();
        else if(!is_punct(")"))
          throw parse_error(cur().line, "expected ',' or ')'");
      }
      advance();
      return n;
    }

    n->kind = ast_expr_kind::CORE;
    n->core = expr_kind::SYMBOL;
    n->symbol = name;
    return n;
  }
};

void parse_file_into(
  const std::string &path,
  const std::string &text,
  parsed_unit &out,
  include_context &ctx,
  bool is_unit_file)
{
  parser p(path, text, out, ctx, is_unit_file);
  p.run();
}

} // namespace

parsed_unit parse_unit(const source_unit &src)
{
  parsed_unit out;
  include_context ctx;
  ctx.search_paths = src.includes;
  ctx.warnings = &out.warnings;
  parse_file_into(src.path, src.text, out, ctx, true);
  return out;
}

parsed_unit parse_string(const std::string &text, const std::string &path)
{
  source_unit src;
  src.path = path;
  src.text = text;
  return parse_unit(src);
}

source_unit load_source_unit(
  const std::string &path, const std::vector<std::string> &includes)
{
  std::ifstream in(path, std::ios::binary);
  if(!in)
    throw io_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  source_unit src;
  src.path = path;
  src.text = ss.str();
  src.includes = includes;
  return src;
}

} // namespace kbmc
