#include "replay/interpreter.h"

#include <algorithm>
#include <cassert>

#include "symex/nondet_key.h"
#include "util/arith.h"
#include "util/errors.h"

namespace kbmc
{

std::optional<std::uint64_t> map_nondet_source::get(const std::string &key, const typet &)
{
  auto it = values.find(key);
  if(it != values.end())
    return it->second;
  missing.push_back(key);
  if(fail_on_missing)
    throw missing_assignment(key);
  return std::nullopt;
}

namespace
{

struct cell
{
  bool pending = true;
  std::string key;
  std::uint64_t bits = 0;
};

struct var_state
{
  typet type;          // declared type (possibly array)
  typet cell_type;     // element/scalar type
  std::vector<cell> cells;
};

struct heap_object
{
  std::uint32_t key = 0;
  std::string label;
  std::string ctx_key;
  typet elem_type;
  std::vector<typet> field_types;
  std::int64_t count = 0;
  bool live = true;
  bool escaped = false;
  bool param = false;
  int alloc_line = 0;
  std::string owner; // frame identity of the allocating frame
  std::vector<std::vector<cell>> fields; // fields[f][i]
};

struct active_loop
{
  loop_info info;
  int visits = 0;   // head arrivals
  bool in_body = false;
};

struct frame
{
  const goto_program *gp = nullptr;
  int pc = 0;
  std::string ctx;
  std::map<std::string, var_state> vars;
  std::vector<active_loop> loops;
  std::vector<loop_info> loop_table;
  exprt caller_lhs;      // where the result goes in the caller
  int call_line = 0;
};

class interp
{
public:
  interp(
    const goto_model &model,
    const std::string &function,
    nondet_source &nondet,
    const interp_options &opts)
    : model_(model), nondet_(nondet), opts_(opts)
  {
    auto it = model_.functions.find(function);
    if(it == model_.functions.end())
      throw io_error("no such function: " + function);
    push_frame(it->second, "", nullptr, 0);
  }

  interp_result run()
  {
    try
    {
      while(!frames_.empty())
      {
        if(++result_.steps > opts_.step_limit)
        {
          result_.status = interp_status::STEP_LIMIT;
          return result_;
        }
        if(!step())
          return result_;
      }
    }
    catch(const need_nondet &nn)
    {
      result_.status = interp_status::NEED_NONDET;
      result_.pending_key = nn.key;
      result_.pending_type = nn.type;
      if(nn.type->is_pointer())
      {
        result_.pending_pointer_domain.push_back(make_pointer_bits(OBJ_NULL, 0));
        result_.pending_pointer_domain.push_back(make_pointer_bits(OBJ_INVALID, 0));
        for(const auto &[key, o] : heap_)
          for(std::int64_t off = 0; off <= o.count; off++)
            result_.pending_pointer_domain.push_back(
              make_pointer_bits(key, static_cast<std::int32_t>(off)));
      }
      return result_;
    }
    catch(const missing_assignment &)
    {
      throw;
    }
    catch(const std::exception &e)
    {
      result_.status = interp_status::RUNTIME_ERROR;
      if(opts_.record_events)
        result_.events.push_back({0, std::string("error: ") + e.what()});
      return result_;
    }
    result_.status = interp_status::FINISHED;
    return result_;
  }

  static constexpr int ASSUME_FALSE_MARK = -1;

private:
  struct need_nondet
  {
    std::string key;
    typet type;
  };

  const goto_model &model_;
  nondet_source &nondet_;
  interp_options opts_;
  interp_result result_;
  std::vector<frame> frames_;
  std::map<std::uint32_t, heap_object> heap_;
  std::map<std::string, int> on_stack_;
  int depth_watermark_ = 1;
  int malloc_serial_ = 0;

  frame &top() { return frames_.back(); }

  void push_frame(const goto_program &gp, const std::string &ctx, exprt caller_lhs, int call_line)
  {
    frame f;
    f.gp = &gp;
    f.pc = 0;
    f.ctx = ctx;
    f.loop_table = find_loops(gp);
    f.caller_lhs = std::move(caller_lhs);
    f.call_line = call_line;
    frames_.push_back(std::move(f));
    int &cnt = on_stack_[gp.function];
    cnt++;
    depth_watermark_ = std::max(depth_watermark_, cnt);
    result_.max_depth_seen = std::max(result_.max_depth_seen, depth_watermark_);
  }

  // ---- loop bookkeeping and nondet keys ----

  void sync_loops(frame &f)
  {
    while(!f.loops.empty() &&
          (f.pc < f.loops.back().info.head || f.pc > f.loops.back().info.back))
      f.loops.pop_back();
    for(const auto &l : f.loop_table)
    {
      if(l.head != f.pc)
        continue;
      if(!f.loops.empty() && f.loops.back().info.head == l.head)
      {
        f.loops.back().visits++;
        f.loops.back().in_body = false;
      }
      else
      {
        active_loop al;
        al.info = l;
        al.visits = 1;
        al.in_body = false;
        f.loops.push_back(al);
      }
      int contribution = f.loops.back().visits - 1;
      depth_watermark_ = std::max(depth_watermark_, contribution);
      result_.max_depth_seen = std::max(result_.max_depth_seen, depth_watermark_);
    }
  }

  std::string current_ctx(const frame &f) const
  {
    std::string ctx = f.ctx + f.gp->function;
    for(const auto &l : f.loops)
      ctx += ".L" + std::to_string(l.info.head) + "#" + std::to_string(l.visits);
    return ctx;
  }

  std::string instr_key(const frame &f, int idx) const
  {
    return current_ctx(f) + ".I" + std::to_string(idx);
  }

  std::uint64_t resolve_cell(cell &c, const typet &type)
  {
    if(!c.pending)
      return c.bits;
    auto v = nondet_.get(c.key, type);
    if(!v)
      throw need_nondet{c.key, type};
    c.pending = false;
    c.bits = type->is_bool() ? (*v != 0 ? 1 : 0)
                             : trunc_bits(*v, type->is_pointer() ? 64 : type->width);
    return c.bits;
  }

  // ---- variable and heap access ----

  var_state &lookup_var(frame &f, const std::string &name, int line)
  {
    auto it = f.vars.find(name);
    if(it == f.vars.end())
      throw type_error(line, "read of undeclared variable " + name);
    return it->second;
  }

  void declare_var(frame &f, const std::string &name, const typet &t, const std::string &key)
  {
    var_state vs;
    vs.type = t;
    if(t->is_array())
    {
      vs.cell_type = t->sub;
      vs.cells.resize(static_cast<std::size_t>(t->array_length));
      for(std::size_t i = 0; i < vs.cells.size(); i++)
        vs.cells[i].key = key + "[" + std::to_string(i) + "]";
    }
    else
    {
      vs.cell_type = t;
      vs.cells.resize(1);
      vs.cells[0].key = key;
    }
    f.vars[name] = std::move(vs);
  }

  heap_object *find_object(std::uint64_t pointer_bits)
  {
    auto it = heap_.find(pointer_obj(pointer_bits));
    return it == heap_.end() ? nullptr : &it->second;
  }

  bool deref_ok(std::uint64_t pbits, const typet &pointee, int field)
  {
    const heap_object *o = find_object(pbits);
    if(!o || !o->live)
      return false;
    std::int32_t off = pointer_off(pbits);
    if(off < 0 || off >= o->count)
      return false;
    if(field >= 0)
      return o->elem_type->is_struct() &&
             field < static_cast<int>(o->field_types.size()) &&
             same_type(o->field_types[static_cast<std::size_t>(field)], pointee);
    return !o->elem_type->is_struct() && same_type(o->elem_type, pointee);
  }

  // ---- expression evaluation ----

  std::uint64_t eval(frame &f, const exprt &e)
  {
    switch(e->kind)
    {
    case expr_kind::CONSTANT:
      return e->bits;
    case expr_kind::SYMBOL:
    {
      var_state &vs = lookup_var(f, e->symbol, 0);
      if(vs.type->is_array())
        throw type_error(0, "array value read: " + e->symbol);
      return resolve_cell(vs.cells[0], vs.cell_type);
    }
    case expr_kind::UNARY:
      return eval_unary_bits(e->uop, eval(f, e->args[0]), e->args[0]->type);
    case expr_kind::BINARY:
    {
      // logical operators are strict in this language
      std::uint64_t a = eval(f, e->args[0]);
      std::uint64_t b = eval(f, e->args[1]);
      return eval_binary_bits(e->bop, a, b, e->args[0]->type);
    }
    case expr_kind::ITE:
      return eval(f, e->args[0]) != 0 ? eval(f, e->args[1]) : eval(f, e->args[2]);
    case expr_kind::CAST:
      return convert_bits(eval(f, e->args[0]), e->args[0]->type, e->type);
    case expr_kind::INDEX:
    {
      var_state &vs = lookup_var(f, e->args[0]->symbol, 0);
      std::int64_t idx = bits_to_signed(eval(f, e->args[1]), e->args[1]->type);
      if(idx < 0 || idx >= static_cast<std::int64_t>(vs.cells.size()))
        return 0; // out-of-range read yields the default value
      return resolve_cell(vs.cells[static_cast<std::size_t>(idx)], vs.cell_type);
    }
    case expr_kind::DEREF:
    {
      std::uint64_t p = eval(f, e->args[0]);
      if(!deref_ok(p, e->type, e->field))
        return 0;
      heap_object *o = find_object(p);
      std::size_t fi = e->field >= 0 ? static_cast<std::size_t>(e->field) : 0;
      typet ct = e->field >= 0 ? o->field_types[fi] : o->elem_type;
      return resolve_cell(o->fields[fi][static_cast<std::size_t>(pointer_off(p))], ct);
    }
    case expr_kind::PTR_OBJ:
      return pointer_obj(eval(f, e->args[0]));
    case expr_kind::PTR_OFF:
      return static_cast<std::uint32_t>(pointer_off(eval(f, e->args[0])));
    case expr_kind::VALID_DEREF:
    {
      std::uint64_t p = eval(f, e->args[0]);
      const typet &pointee = e->args[0]->type->sub;
      if(pointee->is_struct())
      {
        const heap_object *o = find_object(p);
        std::int32_t off = pointer_off(p);
        return (o && o->live && off >= 0 && off < o->count &&
                o->elem_type->is_struct() &&
                o->elem_type->struct_name == pointee->struct_name)
                 ? 1
                 : 0;
      }
      return deref_ok(p, pointee, -1) ? 1 : 0;
    }
    case expr_kind::CAN_FREE:
    {
      std::uint64_t p = eval(f, e->args[0]);
      if(pointer_obj(p) == OBJ_NULL)
        return 1;
      const heap_object *o = find_object(p);
      return (o && o->live && pointer_off(p) == 0) ? 1 : 0;
    }
    case expr_kind::LIVE_OBJ:
    {
      auto it = heap_.find(e->object_key);
      return (it != heap_.end() && it->second.live) ? 1 : 0;
    }
    case expr_kind::NO_OVERFLOW:
    {
      std::uint64_t a = eval(f, e->args[0]);
      std::uint64_t b = eval(f, e->args[1]);
      return no_signed_overflow(e->bop, a, b, e->args[0]->type) ? 1 : 0;
    }
    case expr_kind::STORE:
      throw type_error(0, "array store expression in concrete evaluation");
    }
    return 0;
  }

  // ---- lvalue writes ----

  void write_lvalue(frame &f, const exprt &lv, std::uint64_t bits, int line)
  {
    switch(lv->kind)
    {
    case expr_kind::SYMBOL:
    {
      auto it = f.vars.find(lv->symbol);
      if(it == f.vars.end())
      {
        declare_var(f, lv->symbol, lv->type, instr_key(f, f.pc));
        it = f.vars.find(lv->symbol);
      }
      it->second.cells[0].pending = false;
      it->second.cells[0].bits = bits;
      return;
    }
    case expr_kind::INDEX:
    {
      var_state &vs = lookup_var(f, lv->args[0]->symbol, line);
      std::int64_t idx = bits_to_signed(eval(f, lv->args[1]), lv->args[1]->type);
      if(idx < 0 || idx >= static_cast<std::int64_t>(vs.cells.size()))
        return; // out-of-range write is dropped
      vs.cells[static_cast<std::size_t>(idx)].pending = false;
      vs.cells[static_cast<std::size_t>(idx)].bits = bits;
      return;
    }
    case expr_kind::DEREF:
    {
      std::uint64_t p = eval(f, lv->args[0]);
      if(!deref_ok(p, lv->type, lv->field))
        return;
      heap_object *o = find_object(p);
      std::size_t fi = lv->field >= 0 ? static_cast<std::size_t>(lv->field) : 0;
      cell &c = o->fields[fi][static_cast<std::size_t>(pointer_off(p))];
      c.pending = false;
      c.bits = bits;
      // a pointer stored into the heap escapes its object
      if(lv->type->is_pointer())
        if(heap_object *stored = find_object(bits))
          stored->escaped = true;
      return;
    }
    default:
      throw type_error(line, "bad assignment target");
    }
  }

  // ---- violations ----

  bool report_violation(const goto_instruction &in, frame &f)
  {
    interp_violation v;
    v.property = in.property;
    v.line = in.source_line;
    v.function = f.gp->function;
    v.detail = in.detail;
    v.rendered = render_violation(in.property, in.detail);
    v.depth = depth_watermark_;
    result_.violation = v;
    result_.status = interp_status::VIOLATION;
    return false;
  }

  bool leak_check(frame &f)
  {
    // the returned pointer escapes before the leak claims run
    auto ret = f.vars.find("__ret");
    if(ret != f.vars.end() && ret->second.cell_type->is_pointer() &&
       !ret->second.cells[0].pending)
      if(heap_object *o = find_object(ret->second.cells[0].bits))
        o->escaped = true;

    if(!f.gp->check_leaks)
      return true;
    for(auto &[key, o] : heap_)
    {
      if(o.param || o.escaped || !o.live)
        continue;
      if(o.owner != current_ctx_root(f))
        continue; // allocated by some other frame
      interp_violation v;
      v.property = property_class::MEMORY_LEAK;
      v.line = o.alloc_line;
      v.function = f.gp->function;
      v.detail = o.label;
      v.rendered = render_violation(property_class::MEMORY_LEAK, o.label);
      v.depth = depth_watermark_;
      result_.violation = v;
      result_.status = interp_status::VIOLATION;
      return false;
    }
    return true;
  }

  std::string current_ctx_root(const frame &f) const
  {
    return f.ctx + f.gp->function;
  }

  // ---- instruction dispatch; returns false when the run ends ----

  bool step()
  {
    frame &f = top();
    sync_loops(f);
    const goto_instruction &in = f.gp->instructions[static_cast<std::size_t>(f.pc)];

    if(opts_.record_events)
      result_.events.push_back({in.source_line, f.gp->function});

    switch(in.kind)
    {
    case goto_kind::DECL:
      declare_var(f, in.symbol, in.decl_type, instr_key(f, f.pc));
      f.pc++;
      return true;

    case goto_kind::HAVOC:
    {
      auto it = f.vars.find(in.symbol);
      if(it == f.vars.end())
        declare_var(f, in.symbol, in.decl_type ? in.decl_type : ty::sint(32), instr_key(f, f.pc));
      else
      {
        std::string key = instr_key(f, f.pc);
        for(std::size_t i = 0; i < it->second.cells.size(); i++)
        {
          it->second.cells[i].pending = true;
          it->second.cells[i].key = it->second.cells.size() == 1
            ? key
            : key + "[" + std::to_string(i) + "]";
        }
      }
      f.pc++;
      return true;
    }

    case goto_kind::ASSIGN:
    {
      std::uint64_t bits = eval(f, in.rhs);
      write_lvalue(f, in.lhs, bits, in.source_line);
      f.pc++;
      return true;
    }

    case goto_kind::ASSUME:
      if(eval(f, in.rhs) == 0)
      {
        result_.status = interp_status::ASSUME_FALSE;
        if(opts_.record_events)
          result_.events.push_back({in.source_line, "(assumption is false)"});
        frames_.clear();
        return false;
      }
      f.pc++;
      return true;

    case goto_kind::ASSERT:
      if(eval(f, in.rhs) == 0)
        return report_violation(in, f);
      f.pc++;
      return true;

    case goto_kind::GOTO:
    {
      bool taken = eval(f, in.guard) != 0;
      bool is_exit = !f.loops.empty() && f.loops.back().info.exit_goto == f.pc;
      if(taken)
        f.pc = in.target;
      else
      {
        if(is_exit && !f.loops.back().in_body)
        {
          f.loops.back().in_body = true;
          depth_watermark_ = std::max(depth_watermark_, f.loops.back().visits);
          result_.max_depth_seen = std::max(result_.max_depth_seen, depth_watermark_);
        }
        f.pc++;
      }
      return true;
    }

    case goto_kind::MALLOC:
    {
      std::uint64_t size = eval(f, in.rhs);
      create_object(f, in, size);
      f.pc++;
      return true;
    }

    case goto_kind::FREE:
    {
      std::uint64_t p = eval(f, in.rhs);
      if(pointer_obj(p) != OBJ_NULL)
      {
        heap_object *o = find_object(p);
        if(o && o->live && pointer_off(p) == 0)
          o->live = false;
      }
      f.pc++;
      return true;
    }

    case goto_kind::FUNCTION_CALL:
    {
      auto it = model_.functions.find(in.callee);
      if(it == model_.functions.end())
        throw type_error(in.source_line, "call to unknown function " + in.callee);
      std::vector<std::uint64_t> argv;
      for(const auto &a : in.args)
        argv.push_back(eval(f, a));
      std::string ctx = instr_key(f, f.pc) + ".C/";
      exprt lhs = in.lhs;
      int line = in.source_line;
      f.pc++; // resume here after the call
      push_frame(it->second, ctx, lhs, line);
      frame &callee = top();
      for(std::size_t i = 0; i < argv.size(); i++)
      {
        const auto &[pname, ptype] = callee.gp->params[i];
        declare_var(callee, pname, ptype, "");
        callee.vars[pname].cells[0].pending = false;
        callee.vars[pname].cells[0].bits = argv[i];
      }
      return true;
    }

    case goto_kind::END:
    {
      if(!leak_check(f))
        return false;
      std::optional<std::uint64_t> retval;
      if(f.gp->return_type)
      {
        auto it = f.vars.find("__ret");
        if(it != f.vars.end())
          retval = resolve_cell(it->second.cells[0], it->second.cell_type);
      }
      exprt caller_lhs = f.caller_lhs;
      int line = f.call_line;
      on_stack_[f.gp->function]--;
      frames_.pop_back();
      if(frames_.empty())
        return false; // FINISHED set by run()
      if(caller_lhs && retval)
        write_lvalue(top(), caller_lhs, *retval, line);
      return true;
    }
    }
    return true;
  }

  void create_object(frame &f, const goto_instruction &in, std::uint64_t size_bytes)
  {
    std::string ctx_key = instr_key(f, f.pc);
    std::uint32_t key = object_key_from_string(ctx_key);
    auto existing = heap_.find(key);
    if(existing != heap_.end() && existing->second.ctx_key != ctx_key)
      throw encoding_error("object key collision: " + ctx_key);

    heap_object o;
    o.key = key;
    o.ctx_key = ctx_key;
    o.label = "dynamic_" + std::to_string(++malloc_serial_) + "_array";
    o.elem_type = in.alloc_type;
    o.param = in.param_object;
    o.alloc_line = in.source_line;
    o.owner = current_ctx_root(f);
    std::int64_t elem_size = size_of(in.alloc_type, model_.structs);
    o.count = in.param_object
      ? 1
      : (elem_size > 0 ? static_cast<std::int64_t>(size_bytes) / elem_size : 0);
    if(in.alloc_type->is_struct())
    {
      const struct_def *def = model_.structs.find(in.alloc_type->struct_name);
      if(!def)
        throw type_error(in.source_line, "unknown struct in malloc");
      for(const auto &fd : def->fields)
        o.field_types.push_back(fd.type);
    }
    else
      o.field_types.push_back(in.alloc_type);
    o.fields.resize(o.field_types.size());
    for(std::size_t fi = 0; fi < o.fields.size(); fi++)
    {
      o.fields[fi].resize(static_cast<std::size_t>(o.count));
      for(std::int64_t i = 0; i < o.count; i++)
        o.fields[fi][static_cast<std::size_t>(i)].key =
          ctx_key + ".f" + std::to_string(fi) + "[" + std::to_string(i) + "]";
    }
    heap_[key] = std::move(o);
    write_lvalue(f, in.lhs, make_pointer_bits(key, 0), in.source_line);
  }
};

} // namespace

interp_result interpret(
  const goto_model &model,
  const std::string &function,
  nondet_source &nondet,
  const interp_options &opts)
{
  interp i(model, function, nondet, opts);
  return i.run();
}

} // namespace kbmc
