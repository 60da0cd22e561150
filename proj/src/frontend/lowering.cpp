#include "frontend/lowering.h"

#include <cassert>
#include <map>
#include <set>

#include "util/arith.h"
#include "util/errors.h"

namespace kbmc
{

namespace
{

// marker for the still-untyped NULL literal
bool is_null_literal(const exprt &e)
{
  return e && e->kind == expr_kind::CONSTANT && !e->type && e->bits == 0;
}

exprt untyped_null()
{
  auto n = std::make_shared<expr_node>();
  n->kind = expr_kind::CONSTANT;
  n->bits = 0;
  n->type = nullptr;
  return n;
}

class lowerer
{
public:
  lowerer(const function_decl &fn, const parsed_unit &unit)
    : fn_(fn), unit_(unit)
  {
  }

  goto_program run()
  {
    gp_.function = fn_.name;
    gp_.file = fn_.file;
    gp_.return_type = fn_.return_type;
    gp_.end_line = fn_.decl_line;

    push_scope();
    for(const auto &p : fn_.params)
    {
      if(p.type->is_struct() || p.type->is_array())
        throw unsupported_construct(fn_.decl_line, "aggregate parameter");
      declare(p.name, p.type, fn_.decl_line, /*emit_decl=*/false);
      gp_.params.push_back({p.name, p.type});
    }
    if(fn_.return_type)
    {
      // indeterminate unless a return statement assigns it
      emit_decl("__ret", fn_.return_type, fn_.decl_line);
    }

    for(const auto &st : fn_.body)
      lower_statement(*st);

    // function end
    goto_instruction end;
    end.kind = goto_kind::END;
    end.source_line = gp_.end_line;
    emit(std::move(end));

    int end_idx = gp_.end_index();
    for(int idx : end_fixups_)
      gp_.instructions[idx].target = end_idx;

    std::string err = validate_goto_program(gp_);
    if(!err.empty())
      throw type_error(fn_.decl_line, "internal lowering error: " + err);
    return std::move(gp_);
  }

private:
  const function_decl &fn_;
  const parsed_unit &unit_;
  goto_program gp_;
  std::vector<std::map<std::string, std::pair<std::string, typet>>> scopes_;
  std::map<std::string, int> name_counts_;
  int temp_count_ = 0;
  std::vector<int> end_fixups_; // GOTOs that jump to END

  // ---- emission helpers ----

  int emit(goto_instruction in)
  {
    in.index = static_cast<int>(gp_.instructions.size());
    gp_.instructions.push_back(std::move(in));
    return gp_.instructions.back().index;
  }

  void emit_decl(const std::string &unique, typet t, int line)
  {
    goto_instruction d;
    d.kind = goto_kind::DECL;
    d.symbol = unique;
    d.decl_type = std::move(t);
    d.source_line = line;
    emit(std::move(d));
  }

  int emit_goto(exprt guard, int line)
  {
    goto_instruction g;
    g.kind = goto_kind::GOTO;
    g.guard = std::move(guard);
    g.source_line = line;
    g.target = -1;
    return emit(std::move(g));
  }

  void patch(int idx, int target) { gp_.instructions[idx].target = target; }
  int here() const { return static_cast<int>(gp_.instructions.size()); }

  // ---- scopes ----

  void push_scope() { scopes_.emplace_back(); }
  void pop_scope() { scopes_.pop_back(); }

  std::string declare(const std::string &name, typet t, int line, bool emit_decl_instr = true)
  {
    auto &scope = scopes_.back();
    if(scope.count(name))
      throw type_error(line, "redeclaration of '" + name + "'");
    int n = ++name_counts_[name];
    std::string unique = n == 1 ? name : name + "$" + std::to_string(n);
    scope[name] = {unique, t};
    if(t->is_struct() || (t->is_array() && t->sub->is_struct()))
    {
      const struct_def *def = lookup_struct(t->is_array() ? t->sub : t, line);
      for(const auto &f : def->fields)
      {
        typet ft = t->is_array() ? ty::array(f.type, t->array_length) : f.type;
        if(emit_decl_instr)
          emit_decl(unique + "." + f.name, ft, line);
      }
    }
    else if(emit_decl_instr)
      emit_decl(unique, t, line);
    return unique;
  }

  std::pair<std::string, typet> lookup(const std::string &name, int line)
  {
    for(auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
    {
      auto found = it->find(name);
      if(found != it->end())
        return found->second;
    }
    throw type_error(line, "undeclared identifier '" + name + "'");
  }

  const struct_def *lookup_struct(const typet &t, int line)
  {
    const struct_def *d = unit_.structs.find(t->struct_name);
    if(!d)
      throw type_error(line, "unknown struct '" + t->struct_name + "'");
    return d;
  }

  std::string fresh_temp()
  {
    return "__t" + std::to_string(++temp_count_);
  }

  // ---- conversions ----

  exprt convert(exprt e, const typet &to, int line)
  {
    if(is_null_literal(e))
    {
      if(!to->is_pointer())
        throw type_error(line, "NULL used in non-pointer context");
      return ex::null_pointer(to);
    }
    if(same_type(e->type, to))
      return e;
    if(to->is_pointer() || e->type->is_pointer())
      throw type_error(line, "invalid conversion involving pointer type " +
                               type_to_string(e->type->is_pointer() ? e->type : to));
    if(e->type->is_array() || to->is_array() || e->type->is_struct() || to->is_struct())
      throw type_error(line, "invalid aggregate conversion");
    // integer/bool conversions fold immediately on constants
    if(e->kind == expr_kind::CONSTANT)
      return ex::constant(convert_bits(e->bits, e->type, to), to);
    return ex::cast(e, to);
  }

  typet unify(const exprt &a, const exprt &b, int line)
  {
    if(is_null_literal(a) && is_null_literal(b))
      throw type_error(line, "cannot unify two NULLs");
    if(is_null_literal(a))
      return unify(b, a, line);
    if(a->type->is_pointer())
    {
      if(is_null_literal(b) || same_type(a->type, b->type))
        return a->type;
      throw type_error(line, "pointer type mismatch");
    }
    if(is_null_literal(b) || b->type->is_pointer())
      throw type_error(line, "pointer/integer mix");
    if(a->type->is_bool() && b->type->is_bool())
      return ty::boolean();
    auto as_int = [&](const typet &t) -> typet {
      if(t->is_bool())
        return ty::sint(32);
      if(!t->is_integer())
        throw type_error(line, "arithmetic on non-scalar " + type_to_string(t));
      return t;
    };
    typet ta = as_int(a->type), tb = as_int(b->type);
    int w = std::max(ta->width, tb->width);
    bool uns = (ta->width == w && ta->is_unsigned()) ||
               (tb->width == w && tb->is_unsigned());
    return uns ? ty::uint(w) : ty::sint(w);
  }

  exprt to_bool(exprt e, int line)
  {
    if(is_null_literal(e))
      throw type_error(line, "NULL is not a condition");
    if(e->type->is_bool())
      return e;
    if(e->type->is_integer())
      return ex::binary(binary_op::NE, e,
                        ex::int_const(0, e->type), ty::boolean());
    if(e->type->is_pointer())
      return ex::binary(binary_op::NE, e, ex::null_pointer(e->type), ty::boolean());
    throw type_error(line, "condition is not scalar");
  }

  // ---- expression lowering ----

  // returns a pure core expression; emits hoisted instructions for
  // calls and nondet
  exprt lower_expr(const ast_exprt &a)
  {
    switch(a->kind)
    {
    case ast_expr_kind::CORE:
      return lower_core(a);
    case ast_expr_kind::CALL:
      return lower_call_expr(a);
    case ast_expr_kind::NONDET:
    {
      std::string tmp = declare(fresh_temp(), a->type, a->line);
      goto_instruction h;
      h.kind = goto_kind::HAVOC;
      h.symbol = tmp;
      h.decl_type = a->type;
      h.source_line = a->line;
      emit(std::move(h));
      return ex::symbol(tmp, a->type);
    }
    case ast_expr_kind::SIZEOF:
      return ex::int_const(size_of(a->type, unit_.structs), ty::uint(64));
    case ast_expr_kind::MALLOC:
      throw type_error(a->line, "malloc() may only appear as the right-hand side of an assignment to a pointer");
    }
    throw type_error(a->line, "bad expression");
  }

  exprt lower_call_expr(const ast_exprt &a)
  {
    const function_decl *callee = unit_.find_function(a->symbol);
    if(!callee)
      throw type_error(a->line, "call to unknown function '" + a->symbol + "'");
    if(!callee->return_type)
      throw type_error(a->line, "void function '" + a->symbol + "' used as a value");
    std::string tmp = declare(fresh_temp(), callee->return_type, a->line);
    emit_call(a, ex::symbol(tmp, callee->return_type));
    return ex::symbol(tmp, callee->return_type);
  }

  void emit_call(const ast_exprt &a, exprt lhs /* may be null */)
  {
    const function_decl *callee = unit_.find_function(a->symbol);
    if(!callee)
      throw type_error(a->line, "call to unknown function '" + a->symbol + "'");
    if(a->args.size() != callee->params.size())
      throw type_error(a->line, "wrong number of arguments to '" + a->symbol + "'");
    goto_instruction c;
    c.kind = goto_kind::FUNCTION_CALL;
    c.callee = a->symbol;
    c.source_line = a->line;
    for(std::size_t i = 0; i < a->args.size(); i++)
    {
      exprt arg = lower_expr(a->args[i]);
      c.args.push_back(convert(arg, callee->params[i].type, a->line));
    }
    c.lhs = std::move(lhs);
    emit(std::move(c));
  }

  exprt lower_core(const ast_exprt &a)
  {
    switch(a->core)
    {
    case expr_kind::CONSTANT:
      if(!a->type) // NULL literal
        return untyped_null();
      return ex::constant(a->bits, a->type);

    case expr_kind::SYMBOL:
    {
      auto [unique, t] = lookup(a->symbol, a->line);
      if(t->is_struct())
        throw type_error(a->line, "struct value '" + a->symbol + "' used without a field");
      return ex::symbol(unique, t);
    }

    case expr_kind::UNARY:
    {
      exprt arg = lower_expr(a->args[0]);
      if(a->uop == unary_op::LOG_NOT)
        return ex::not_(to_bool(arg, a->line));
      if(is_null_literal(arg) || !arg->type->is_integer())
        throw type_error(a->line, "unary arithmetic on non-integer");
      return ex::unary(a->uop, arg);
    }

    case expr_kind::BINARY:
      return lower_binary(a);

    case expr_kind::CAST:
    {
      exprt arg = lower_expr(a->args[0]);
      if(a->type->is_pointer())
        throw type_error(a->line, "cast to pointer type");
      if(!is_null_literal(arg) && arg->type->is_pointer())
        throw type_error(a->line, "cast from pointer type");
      return convert(arg, a->type, a->line);
    }

    case expr_kind::INDEX:
      return lower_index(a, /*want_struct=*/false, -1, nullptr);

    case expr_kind::DEREF:
      return lower_deref_like(a);

    default:
      throw type_error(a->line, "bad expression");
    }
  }

  exprt lower_binary(const ast_exprt &a)
  {
    int line = a->line;
    exprt l = lower_expr(a->args[0]);
    exprt r = lower_expr(a->args[1]);

    switch(a->bop)
    {
    case binary_op::LOG_AND:
      return ex::and_(to_bool(l, line), to_bool(r, line));
    case binary_op::LOG_OR:
      return ex::or_(to_bool(l, line), to_bool(r, line));
    case binary_op::SHL:
    case binary_op::SHR:
    {
      if(is_null_literal(l) || !l->type->is_integer())
        throw type_error(line, "shift of non-integer");
      return ex::binary(a->bop, l, convert(r, l->type, line), l->type);
    }
    case binary_op::ADD:
    case binary_op::SUB:
      if(!is_null_literal(l) && l->type->is_pointer())
      {
        if(!is_null_literal(r) && r->type->is_pointer())
          throw unsupported_construct(line, "pointer difference");
        return ex::binary(a->bop, l, convert(r, ty::sint(32), line), l->type);
      }
      [[fallthrough]];
    case binary_op::MUL:
    case binary_op::DIV:
    case binary_op::REM:
    case binary_op::BIT_AND:
    case binary_op::BIT_OR:
    case binary_op::BIT_XOR:
    {
      typet t = unify(l, r, line);
      if(t->is_pointer())
        throw type_error(line, "arithmetic on pointers");
      if(t->is_bool())
        t = ty::sint(32);
      return ex::binary(a->bop, convert(l, t, line), convert(r, t, line), t);
    }
    case binary_op::EQ:
    case binary_op::NE:
    {
      typet t = unify(l, r, line);
      return ex::binary(a->bop, convert(l, t, line), convert(r, t, line), ty::boolean());
    }
    case binary_op::LT:
    case binary_op::LE:
    case binary_op::GT:
    case binary_op::GE:
    {
      typet t = unify(l, r, line);
      if(t->is_pointer())
        throw unsupported_construct(line, "relational comparison of pointers");
      if(t->is_bool())
        t = ty::sint(32);
      return ex::binary(a->bop, convert(l, t, line), convert(r, t, line), ty::boolean());
    }
    default:
      throw type_error(line, "bad binary operator");
    }
  }

  // a[i] — named array read, pointer indexing, or (with field) the
  // element of a struct array / struct pointer
  exprt lower_index(
    const ast_exprt &a,
    bool want_struct,
    int field_idx,
    typet field_type,
    const std::string &field_name = "")
  {
    int line = a->line;
    // base SYMBOL of array type must not round-trip through lower_core
    // (struct arrays are flattened)
    const ast_exprt &base_ast = a->args[0];
    exprt idx = lower_expr(a->args[1]);
    idx = convert(idx, ty::sint(32), line);

    if(base_ast->kind == ast_expr_kind::CORE && base_ast->core == expr_kind::SYMBOL)
    {
      auto [unique, t] = lookup(base_ast->symbol, line);
      if(t->is_array())
      {
        if(t->sub->is_struct())
        {
          if(field_idx < 0)
            throw type_error(line, "struct array element used without a field");
          return ex::index(
            ex::symbol(unique + "." + field_name, ty::array(field_type, t->array_length)), idx);
        }
        if(want_struct)
          throw type_error(line, "field access on non-struct element");
        return ex::index(ex::symbol(unique, t), idx);
      }
    }

    exprt base = lower_expr(base_ast);
    if(is_null_literal(base) || !base->type->is_pointer())
      throw type_error(line, "subscripted value is neither array nor pointer");
    exprt ptr = ex::binary(binary_op::ADD, base, idx, base->type);
    const typet &pointee = base->type->sub;
    if(pointee->is_struct())
    {
      if(field_idx < 0)
        throw type_error(line, "struct pointee used without a field");
      return ex::deref(ptr, field_idx, field_type);
    }
    if(field_idx >= 0)
      throw type_error(line, "field access on non-struct element");
    return ex::deref(ptr, -1, pointee);
  }

  // *p, p->f, x.f, a[i].f, (*p).f
  exprt lower_deref_like(const ast_exprt &a)
  {
    int line = a->line;
    const ast_exprt &base = a->args[0];

    if(a->field.empty())
    {
      // *p
      exprt p = lower_expr(base);
      if(is_null_literal(p) || !p->type->is_pointer())
        throw type_error(line, "dereference of non-pointer");
      if(p->type->sub->is_struct())
        throw type_error(line, "struct value dereference needs a field");
      return ex::deref(p, -1, p->type->sub);
    }

    if(a->arrow)
    {
      // p->f
      exprt p = lower_expr(base);
      if(is_null_literal(p) || !p->type->is_pointer() || !p->type->sub->is_struct())
        throw type_error(line, "-> on non-struct-pointer");
      const struct_def *def = lookup_struct(p->type->sub, line);
      int fi = def->field_index(a->field);
      if(fi < 0)
        throw type_error(line, "no field '" + a->field + "' in struct " + def->name);
      return ex::deref(p, fi, def->fields[fi].type);
    }

    // dot access
    if(base->kind == ast_expr_kind::CORE && base->core == expr_kind::SYMBOL)
    {
      auto [unique, t] = lookup(base->symbol, line);
      if(!t->is_struct())
        throw type_error(line, "'.' on non-struct");
      const struct_def *def = lookup_struct(t, line);
      int fi = def->field_index(a->field);
      if(fi < 0)
        throw type_error(line, "no field '" + a->field + "' in struct " + def->name);
      return ex::symbol(unique + "." + a->field, def->fields[fi].type);
    }
    if(base->kind == ast_expr_kind::CORE && base->core == expr_kind::INDEX)
    {
      // a[i].f on a struct array, or p[i].f on a struct pointer
      const ast_exprt &arr = base->args[0];
      if(arr->kind == ast_expr_kind::CORE && arr->core == expr_kind::SYMBOL)
      {
        auto [unique, t] = lookup(arr->symbol, line);
        (void)unique;
        const typet &elem = t->is_array() ? t->sub : (t->is_pointer() ? t->sub : t);
        if(!elem->is_struct())
          throw type_error(line, "'.' on non-struct element");
        const struct_def *def = lookup_struct(elem, line);
        int fi = def->field_index(a->field);
        if(fi < 0)
          throw type_error(line, "no field '" + a->field + "' in struct " + def->name);
        return lower_index(base, true, fi, def->fields[fi].type, a->field);
      }
      throw type_error(line, "unsupported struct element access");
    }
    if(base->kind == ast_expr_kind::CORE && base->core == expr_kind::DEREF && base->field.empty())
    {
      // (*p).f
      exprt p = lower_expr(base->args[0]);
      if(is_null_literal(p) || !p->type->is_pointer() || !p->type->sub->is_struct())
        throw type_error(line, "(*p).f on non-struct-pointer");
      const struct_def *def = lookup_struct(p->type->sub, line);
      int fi = def->field_index(a->field);
      if(fi < 0)
        throw type_error(line, "no field '" + a->field + "' in struct " + def->name);
      return ex::deref(p, fi, def->fields[fi].type);
    }
    throw type_error(line, "unsupported member access");
  }

  bool is_lvalue(const exprt &e)
  {
    return e->kind == expr_kind::SYMBOL || e->kind == expr_kind::DEREF ||
           (e->kind == expr_kind::INDEX && e->args[0]->kind == expr_kind::SYMBOL);
  }

  // ---- statements ----

  void lower_statement(const statement &st)
  {
    switch(st.kind)
    {
    case stmt_kind::DECL:
      lower_decl(st);
      return;
    case stmt_kind::ASSIGN:
      lower_assign(st);
      return;
    case stmt_kind::IF:
      lower_if(st);
      return;
    case stmt_kind::WHILE:
      lower_while(st);
      return;
    case stmt_kind::FOR:
      lower_for(st);
      return;
    case stmt_kind::RETURN:
      lower_return(st);
      return;
    case stmt_kind::ASSERT_:
    {
      exprt cond = to_bool(lower_expr(st.value), st.line);
      goto_instruction a;
      a.kind = goto_kind::ASSERT;
      a.rhs = cond;
      a.property = property_class::USER_ASSERT;
      a.detail = st.text;
      a.source_line = st.line;
      emit(std::move(a));
      return;
    }
    case stmt_kind::ASSUME:
    {
      exprt cond = to_bool(lower_expr(st.value), st.line);
      goto_instruction a;
      a.kind = goto_kind::ASSUME;
      a.rhs = cond;
      a.source_line = st.line;
      emit(std::move(a));
      return;
    }
    case stmt_kind::EXPR:
    {
      if(st.value->kind == ast_expr_kind::CALL)
      {
        emit_call(st.value, nullptr);
        return;
      }
      throw type_error(st.line, "expression statement has no effect");
    }
    case stmt_kind::FREE:
    {
      exprt p = lower_expr(st.value);
      if(is_null_literal(p))
        p = ex::null_pointer(ty::pointer(ty::sint(8)));
      if(!p->type->is_pointer())
        throw type_error(st.line, "free() of non-pointer");
      goto_instruction f;
      f.kind = goto_kind::FREE;
      f.rhs = p;
      f.source_line = st.line;
      emit(std::move(f));
      return;
    }
    case stmt_kind::BLOCK:
      push_scope();
      for(const auto &s : st.body)
        lower_statement(*s);
      pop_scope();
      return;
    }
  }

  void lower_decl(const statement &st)
  {
    if(st.decl_type->is_struct() || st.decl_type->is_array())
    {
      if(st.value)
        throw unsupported_construct(st.line, "aggregate initializer");
      declare(st.name, st.decl_type, st.line);
      return;
    }
    std::string unique = declare(st.name, st.decl_type, st.line);
    if(st.value)
      lower_assign_to(ex::symbol(unique, st.decl_type), st.value, st.line);
  }

  void lower_assign(const statement &st)
  {
    exprt lv = lower_expr(st.lhs);
    if(!is_lvalue(lv))
      throw type_error(st.line, "assignment target is not an lvalue");
    if(lv->type->is_array() || lv->type->is_struct())
      throw unsupported_construct(st.line, "whole-aggregate assignment");
    lower_assign_to(lv, st.value, st.line);
  }

  void lower_assign_to(exprt lv, const ast_exprt &rhs, int line)
  {
    if(rhs->kind == ast_expr_kind::MALLOC)
    {
      if(!lv->type->is_pointer())
        throw type_error(line, "malloc() assigned to non-pointer");
      exprt size = convert(lower_expr(rhs->args[0]), ty::uint(64), line);
      goto_instruction m;
      m.kind = goto_kind::MALLOC;
      m.lhs = lv;
      m.rhs = size;
      m.alloc_type = lv->type->sub;
      m.source_line = line;
      emit(std::move(m));
      return;
    }
    if(rhs->kind == ast_expr_kind::CALL)
    {
      const function_decl *callee = unit_.find_function(rhs->symbol);
      if(!callee)
        throw type_error(line, "call to unknown function '" + rhs->symbol + "'");
      if(!callee->return_type || !same_type(callee->return_type, lv->type))
      {
        if(!callee->return_type)
          throw type_error(line, "void function result assigned");
        // convert through a temp
        std::string tmp = declare(fresh_temp(), callee->return_type, line);
        emit_call(rhs, ex::symbol(tmp, callee->return_type));
        emit_assign(lv, convert(ex::symbol(tmp, callee->return_type), lv->type, line), line);
        return;
      }
      emit_call(rhs, lv);
      return;
    }
    if(rhs->kind == ast_expr_kind::NONDET && lv->kind == expr_kind::SYMBOL &&
       same_type(rhs->type, lv->type))
    {
      goto_instruction h;
      h.kind = goto_kind::HAVOC;
      h.symbol = lv->symbol;
      h.decl_type = lv->type;
      h.source_line = line;
      emit(std::move(h));
      return;
    }
    exprt value = convert(lower_expr(rhs), lv->type, line);
    emit_assign(lv, value, line);
  }

  void emit_assign(exprt lv, exprt value, int line)
  {
    goto_instruction a;
    a.kind = goto_kind::ASSIGN;
    a.lhs = std::move(lv);
    a.rhs = std::move(value);
    a.source_line = line;
    emit(std::move(a));
  }

  void lower_if(const statement &st)
  {
    exprt cond = to_bool(lower_expr(st.value), st.line);
    int jump_else = emit_goto(ex::not_(cond), st.line);
    push_scope();
    for(const auto &s : st.body)
      lower_statement(*s);
    pop_scope();
    if(st.else_body.empty())
    {
      patch(jump_else, here());
      return;
    }
    int jump_end = emit_goto(ex::bool_const(true), st.line);
    patch(jump_else, here());
    push_scope();
    for(const auto &s : st.else_body)
      lower_statement(*s);
    pop_scope();
    patch(jump_end, here());
  }

  void lower_while(const statement &st)
  {
    int head = here();
    exprt cond = st.value ? to_bool(lower_expr(st.value), st.line)
                          : ex::bool_const(true);
    int jump_exit = emit_goto(ex::not_(cond), st.line);
    push_scope();
    for(const auto &s : st.body)
      lower_statement(*s);
    pop_scope();
    emit_goto(ex::bool_const(true), st.line);
    patch(here() - 1, head);
    patch(jump_exit, here());
  }

  void lower_for(const statement &st)
  {
    push_scope();
    if(st.init)
      lower_statement(*st.init);
    int head = here();
    exprt cond = st.value ? to_bool(lower_expr(st.value), st.line)
                          : ex::bool_const(true);
    int jump_exit = emit_goto(ex::not_(cond), st.line);
    push_scope();
    for(const auto &s : st.body)
      lower_statement(*s);
    pop_scope();
    if(st.step)
      lower_statement(*st.step);
    emit_goto(ex::bool_const(true), st.line);
    patch(here() - 1, head);
    patch(jump_exit, here());
    pop_scope();
  }

  void lower_return(const statement &st)
  {
    if(st.value)
    {
      if(!fn_.return_type)
        throw type_error(st.line, "return with a value in void function");
      exprt v = convert(lower_expr(st.value), fn_.return_type, st.line);
      emit_assign(ex::symbol("__ret", fn_.return_type), v, st.line);
    }
    else if(fn_.return_type)
      throw type_error(st.line, "return without a value");
    int j = emit_goto(ex::bool_const(true), st.line);
    end_fixups_.push_back(j);
  }
};

} // namespace

goto_program lower_to_goto(const function_decl &fn, const parsed_unit &unit)
{
  lowerer l(fn, unit);
  return l.run();
}

goto_model lower_unit(const parsed_unit &unit)
{
  goto_model model;
  model.structs = unit.structs;
  for(const auto &fn : unit.unit_functions)
    model.functions.emplace(fn.name, lower_to_goto(fn, unit));
  for(const auto &fn : unit.include_functions)
    if(!model.functions.count(fn.name))
      model.functions.emplace(fn.name, lower_to_goto(fn, unit));
  return model;
}

goto_program mark_entry_nondet(const goto_program &gp)
{
  std::vector<goto_instruction> prologue;
  int line = gp.instructions.empty() ? 0 : gp.instructions.front().source_line;

  auto add = [&](goto_instruction in) {
    in.index = static_cast<int>(prologue.size());
    in.source_line = line;
    prologue.push_back(std::move(in));
  };

  for(const auto &[name, type] : gp.params)
  {
    goto_instruction d;
    d.kind = goto_kind::DECL;
    d.symbol = name;
    d.decl_type = type;
    add(std::move(d));

    if(type->is_pointer())
    {
      // nondeterministic choice: NULL or a fresh object with nondet
      // contents
      std::string choice = "__choice_" + name;
      goto_instruction dc;
      dc.kind = goto_kind::DECL;
      dc.symbol = choice;
      dc.decl_type = ty::boolean();
      add(std::move(dc));

      goto_instruction hv;
      hv.kind = goto_kind::HAVOC;
      hv.symbol = choice;
      hv.decl_type = ty::boolean();
      add(std::move(hv));

      int jump_fresh = static_cast<int>(prologue.size());
      goto_instruction g1;
      g1.kind = goto_kind::GOTO;
      g1.guard = ex::symbol(choice, ty::boolean());
      add(std::move(g1));

      goto_instruction asg;
      asg.kind = goto_kind::ASSIGN;
      asg.lhs = ex::symbol(name, type);
      asg.rhs = ex::null_pointer(type);
      add(std::move(asg));

      int jump_done = static_cast<int>(prologue.size());
      goto_instruction g2;
      g2.kind = goto_kind::GOTO;
      g2.guard = ex::bool_const(true);
      add(std::move(g2));

      prologue[jump_fresh].target = static_cast<int>(prologue.size());
      goto_instruction m;
      m.kind = goto_kind::MALLOC;
      m.lhs = ex::symbol(name, type);
      m.rhs = ex::int_const(1, ty::uint(64)); // one element; size fixed below
      m.alloc_type = type->sub;
      m.param_object = true;
      add(std::move(m));
      prologue[jump_done].target = static_cast<int>(prologue.size());
    }
    else
    {
      goto_instruction hv;
      hv.kind = goto_kind::HAVOC;
      hv.symbol = name;
      hv.decl_type = type;
      add(std::move(hv));
    }
  }

  goto_program out;
  out.function = gp.function;
  out.file = gp.file;
  out.params = gp.params;
  out.return_type = gp.return_type;
  out.check_leaks = gp.check_leaks;
  out.end_line = gp.end_line;
  out.instructions = prologue;
  int shift = static_cast<int>(prologue.size());
  for(const auto &in : gp.instructions)
  {
    goto_instruction copy = in;
    copy.index += shift;
    if(copy.kind == goto_kind::GOTO)
      copy.target += shift;
    out.instructions.push_back(std::move(copy));
  }
  return out;
}

std::string validate_goto_program(const goto_program &gp)
{
  if(gp.instructions.empty())
    return "empty program";
  int ends = 0;
  for(const auto &in : gp.instructions)
  {
    if(in.kind == goto_kind::END)
      ends++;
    if(in.kind == goto_kind::GOTO)
    {
      if(in.target < 0 || in.target >= static_cast<int>(gp.instructions.size()))
        return "jump target out of range at " + std::to_string(in.index);
      if(!in.guard || !in.guard->type->is_bool())
        return "non-boolean jump guard at " + std::to_string(in.index);
    }
    if(in.kind == goto_kind::ASSERT && !in.rhs)
      return "assert without condition at " + std::to_string(in.index);
  }
  if(ends != 1)
    return "expected exactly one END, found " + std::to_string(ends);
  if(gp.instructions.back().kind != goto_kind::END)
    return "END is not the last instruction";
  return "";
}

} // namespace kbmc
