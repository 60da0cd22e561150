#include "symex/unroll.h"

#include <algorithm>
#include <cassert>
#include <chrono>

#include "symex/loops.h"
#include "symex/nondet_key.h"
#include "util/arith.h"
#include "util/errors.h"

namespace kbmc
{

const char *symex_mode_name(symex_mode m)
{
  switch(m)
  {
  case symex_mode::BASE_CASE: return "base-case";
  case symex_mode::FORWARD_CONDITION: return "forward-condition";
  case symex_mode::INDUCTIVE_STEP: return "inductive-step";
  }
  return "?";
}

deadline deadline::after_seconds(double s)
{
  deadline d;
  d.armed_ = true;
  d.end_ns_ = std::chrono::duration_cast<std::chrono::nanoseconds>(
                std::chrono::steady_clock::now().time_since_epoch())
                .count() +
              static_cast<std::int64_t>(s * 1e9);
  return d;
}

bool deadline::expired() const
{
  if(!armed_)
    return false;
  auto now = std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
               .count();
  return now >= end_ns_;
}

namespace
{

exprt mangle(const exprt &e, const std::string &prefix)
{
  if(!e || prefix.empty())
    return e;
  if(e->kind == expr_kind::SYMBOL)
    return ex::symbol(prefix + e->symbol, e->type);
  if(e->args.empty())
    return e;
  auto n = std::make_shared<expr_node>(*e);
  for(auto &a : n->args)
    a = mangle(a, prefix);
  return n;
}

enum class item_kind
{
  NORMAL,
  FRONTIER,
  HAVOC_SET,
  LEAK_CHECK
};

struct uitem
{
  item_kind kind = item_kind::NORMAL;
  goto_instruction instr; // NORMAL, symbols mangled
  int utarget = -1;       // NORMAL GOTO
  std::string ctx;        // nondet-key context (function + loop chain)
  bool claims_assumed = false;

  // FRONTIER
  std::string loop_id;
  bool recursion = false;

  // HAVOC_SET
  std::vector<std::pair<std::string, typet>> havoc_vars;
  bool havoc_heap = false;
  std::vector<exprt> entry_assume; // mangled claim conditions

  // LEAK_CHECK
  std::string owner;
  bool check_leaks = false;
  std::string ret_symbol;
  typet ret_type;

  int line = 0;
  std::string function;
  std::string file;
};

// ---------------------------------------------------------------- planner

class planner
{
public:
  planner(const goto_model &model, int k, symex_mode mode, const unroll_options &opts)
    : model_(model), k_(k), mode_(mode), opts_(opts)
  {
  }

  std::vector<uitem> plan(const std::string &entry)
  {
    const goto_program &gp = fn(entry);
    call_stack_.push_back(entry);
    expand_function(gp, "", "", nullptr, false);
    call_stack_.pop_back();
    return std::move(items_);
  }

private:
  const goto_model &model_;
  int k_;
  symex_mode mode_;
  const unroll_options &opts_;
  std::vector<uitem> items_;
  std::vector<std::string> call_stack_;
  std::map<const goto_program *, std::vector<loop_info>> loop_cache_;
  std::map<const goto_program *, std::vector<exprt>> claim_cache_;

  const goto_program &fn(const std::string &name) const
  {
    auto it = model_.functions.find(name);
    if(it == model_.functions.end())
      throw encoding_error("no such function: " + name);
    return it->second;
  }

  const std::vector<loop_info> &loops_of(const goto_program &gp)
  {
    auto it = loop_cache_.find(&gp);
    if(it == loop_cache_.end())
      it = loop_cache_.emplace(&gp, find_loops(gp)).first;
    return it->second;
  }

  // all safety-claim conditions of a function, for the inductive-mode
  // entry assumption
  const std::vector<exprt> &claims_of(const goto_program &gp)
  {
    auto it = claim_cache_.find(&gp);
    if(it == claim_cache_.end())
    {
      std::vector<exprt> claims;
      for(const auto &in : gp.instructions)
        if(in.kind == goto_kind::ASSERT)
          claims.push_back(in.rhs);
      it = claim_cache_.emplace(&gp, std::move(claims)).first;
    }
    return it->second;
  }

  int emit(uitem item)
  {
    if(static_cast<std::int64_t>(items_.size()) >= opts_.step_budget)
      throw unwind_overflow();
    if(opts_.timeout && items_.size() % 4096 == 0 && opts_.timeout->expired())
      throw budget_exceeded("timeout during unrolling");
    items_.push_back(std::move(item));
    return static_cast<int>(items_.size()) - 1;
  }

  using pendingt = std::vector<std::pair<int, int>>; // (item, orig target)

  // ctx: nondet-key context ("f.L4#2"); prefix: variable mangle
  void expand_function(
    const goto_program &gp,
    const std::string &ctx_base, // "" for the entry, else "....C/"
    const std::string &caller_prefix_unused,
    const exprt &lhs, // mangled caller lvalue or null
    bool assumed,
    const std::vector<exprt> *args = nullptr,
    int call_line = 0)
  {
    (void)caller_prefix_unused;
    std::string ctx = ctx_base + gp.function;
    std::string prefix = ctx_base.empty() ? "" : ctx_base + gp.function + "::";

    if(args)
    {
      for(std::size_t i = 0; i < args->size(); i++)
      {
        const auto &[pname, ptype] = gp.params[i];
        uitem it;
        it.kind = item_kind::NORMAL;
        it.instr.kind = goto_kind::ASSIGN;
        it.instr.lhs = ex::symbol(prefix + pname, ptype);
        it.instr.rhs = (*args)[i];
        it.instr.source_line = call_line;
        it.ctx = ctx;
        it.instr.index = -1;
        it.claims_assumed = assumed;
        it.function = gp.function;
        it.file = gp.file;
        it.line = call_line;
        emit(std::move(it));
      }
    }

    pendingt pending =
      expand_range(gp, 0, gp.end_index(), ctx, prefix, assumed, ctx_base + gp.function);

    // END label: leak check and (pointer) return escape
    int end_pos = static_cast<int>(items_.size());
    for(auto &[item, target] : pending)
    {
      if(target != gp.end_index())
        throw encoding_error("unresolved jump target in " + gp.function);
      items_[static_cast<std::size_t>(item)].utarget = end_pos;
    }

    uitem lc;
    lc.kind = item_kind::LEAK_CHECK;
    lc.owner = ctx_base + gp.function;
    lc.check_leaks = gp.check_leaks;
    lc.claims_assumed = assumed;
    lc.ctx = ctx;
    lc.line = gp.end_line;
    lc.function = gp.function;
    lc.file = gp.file;
    if(gp.return_type && gp.return_type->is_pointer())
    {
      lc.ret_symbol = prefix + "__ret";
      lc.ret_type = gp.return_type;
    }
    emit(std::move(lc));

    if(lhs && gp.return_type)
    {
      uitem ra;
      ra.kind = item_kind::NORMAL;
      ra.instr.kind = goto_kind::ASSIGN;
      ra.instr.lhs = lhs;
      ra.instr.rhs = ex::symbol(prefix + "__ret", gp.return_type);
      ra.instr.source_line = call_line;
      ra.instr.index = -1;
      ra.ctx = ctx;
      ra.claims_assumed = assumed;
      ra.function = gp.function;
      ra.file = gp.file;
      emit(std::move(ra));
    }
  }

  pendingt expand_range(
    const goto_program &gp,
    int lo,
    int hi,
    const std::string &ctx,
    const std::string &prefix,
    bool assumed,
    const std::string &owner = "")
  {
    const auto &loops = loops_of(gp);
    std::map<int, int> labels;
    pendingt pending;

    auto resolve_here = [&](pendingt &p) {
      pendingt still;
      for(auto &[item, target] : p)
      {
        auto found = labels.find(target);
        if(found != labels.end())
          items_[static_cast<std::size_t>(item)].utarget = found->second;
        else
          still.push_back({item, target});
      }
      p = std::move(still);
    };

    int i = lo;
    while(i < hi)
    {
      const loop_info *loop = nullptr;
      for(const auto &l : loops)
        if(l.head == i && l.back < hi)
        {
          loop = &l;
          break;
        }

      if(loop)
      {
        labels[i] = static_cast<int>(items_.size());

        if(mode_ == symex_mode::INDUCTIVE_STEP)
        {
          uitem hv;
          hv.kind = item_kind::HAVOC_SET;
          hv.ctx = ctx;
          hv.line = gp.instructions[static_cast<std::size_t>(loop->head)].source_line;
          hv.function = gp.function;
          hv.file = gp.file;
          for(const auto &name : loop_modified_vars_of(gp, *loop))
          {
            // the declared type is resolved by the executor
            hv.havoc_vars.push_back({prefix + name, nullptr});
          }
          for(int j = loop->head; j <= loop->back; j++)
          {
            const auto &in = gp.instructions[static_cast<std::size_t>(j)];
            if(in.kind == goto_kind::MALLOC || in.kind == goto_kind::FREE ||
               in.kind == goto_kind::FUNCTION_CALL ||
               (in.kind == goto_kind::ASSIGN && in.lhs->kind == expr_kind::DEREF))
              hv.havoc_heap = true;
          }
          for(const auto &c : claims_of(gp))
            hv.entry_assume.push_back(mangle(c, prefix));
          hv.claims_assumed = assumed;
          emit(std::move(hv));
        }

        int copies = mode_ == symex_mode::INDUCTIVE_STEP ? k_ + 1 : k_;
        for(int c = 1; c <= copies; c++)
        {
          bool body_assumed =
            assumed || (mode_ == symex_mode::INDUCTIVE_STEP && c <= k_);
          std::string body_ctx =
            ctx + ".L" + std::to_string(loop->head) + "#" + std::to_string(c);
          pendingt sub = expand_range(
            gp, loop->head, loop->back, body_ctx, prefix, body_assumed, owner);
          pending.insert(pending.end(), sub.begin(), sub.end());
        }

        // frontier probe: one more evaluation of the loop test, then
        // paths whose guard is still true are cut (and, in forward
        // mode, claimed)
        if(loop->exit_goto < 0)
          throw encoding_error("loop without exit jump in " + gp.function);
        std::string probe_ctx = ctx + ".L" + std::to_string(loop->head) + "#" +
                                std::to_string(copies + 1);
        pendingt sub = expand_range(
          gp, loop->head, loop->exit_goto + 1, probe_ctx, prefix, assumed, owner);
        pending.insert(pending.end(), sub.begin(), sub.end());

        uitem fr;
        fr.kind = item_kind::FRONTIER;
        fr.loop_id = gp.function + "@" + std::to_string(loop->head);
        fr.line = gp.instructions[static_cast<std::size_t>(loop->head)].source_line;
        fr.function = gp.function;
        fr.file = gp.file;
        fr.ctx = ctx;
        emit(std::move(fr));

        i = loop->back + 1;
        resolve_here(pending);
        continue;
      }

      const goto_instruction &in = gp.instructions[static_cast<std::size_t>(i)];
      labels[i] = static_cast<int>(items_.size());

      if(in.kind == goto_kind::FUNCTION_CALL)
      {
        int on_stack = static_cast<int>(
          std::count(call_stack_.begin(), call_stack_.end(), in.callee));
        if(on_stack >= k_)
        {
          // recursion frontier: the path is cut here
          uitem fr;
          fr.kind = item_kind::FRONTIER;
          fr.recursion = true;
          fr.loop_id = "recursion:" + in.callee;
          fr.line = in.source_line;
          fr.function = gp.function;
          fr.file = gp.file;
          fr.ctx = ctx;
          emit(std::move(fr));
        }
        else
        {
          std::vector<exprt> args;
          for(const auto &a : in.args)
            args.push_back(mangle(a, prefix));
          exprt lhs = in.lhs ? mangle(in.lhs, prefix) : nullptr;
          call_stack_.push_back(in.callee);
          expand_function(
            fn(in.callee),
            ctx + ".I" + std::to_string(i) + ".C/",
            prefix,
            lhs,
            assumed,
            &args,
            in.source_line);
          call_stack_.pop_back();
        }
        i++;
        resolve_here(pending);
        continue;
      }

      uitem it;
      it.kind = item_kind::NORMAL;
      it.instr = in;
      it.instr.lhs = mangle(in.lhs, prefix);
      it.instr.rhs = mangle(in.rhs, prefix);
      it.instr.guard = mangle(in.guard, prefix);
      if(!in.symbol.empty() && !prefix.empty())
        it.instr.symbol = prefix + in.symbol;
      it.ctx = ctx;
      it.owner = owner;
      it.claims_assumed = assumed;
      it.function = gp.function;
      it.file = gp.file;
      it.line = in.source_line;
      int pos = emit(std::move(it));
      if(in.kind == goto_kind::GOTO)
        pending.push_back({pos, in.target});

      i++;
      resolve_here(pending);
    }

    resolve_here(pending);
    return pending;
  }
};

// ---------------------------------------------------------------- executor

struct exec_state
{
  exprt guard; // boolean expression over SSA symbols
  std::map<std::string, int> versions;
  bool alive = false;
};

struct exec_object
{
  ssa_object info;
  std::vector<typet> cell_types; // per field
};

class executor
{
public:
  executor(
    const goto_model &model,
    std::vector<uitem> items,
    int k,
    symex_mode mode,
    const unroll_options &opts)
    : model_(model), items_(std::move(items)), mode_(mode), opts_(opts)
  {
    trace_.unwind_bound = k;
    trace_.mode = mode;
  }

  ssa_trace run()
  {
    incoming_.resize(items_.size() + 1);
    exec_state init;
    init.guard = ex::bool_const(true);
    init.alive = true;
    incoming_[0].push_back(std::move(init));

    for(std::size_t i = 0; i < items_.size(); i++)
    {
      if(opts_.timeout && i % 4096 == 0 && opts_.timeout->expired())
        throw budget_exceeded("timeout during symbolic execution");
      if(incoming_[i].empty())
        continue;
      exec_state state = merge_states(std::move(incoming_[i]));
      incoming_[i].clear();
      process(items_[i], state, i);
    }

    finalize_unwinding_claims();
    for(const auto &o : objects_)
      trace_.objects.push_back(o.info);
    return std::move(trace_);
  }

private:
  const goto_model &model_;
  std::vector<uitem> items_;
  symex_mode mode_;
  const unroll_options &opts_;
  ssa_trace trace_;
  std::vector<std::vector<exec_state>> incoming_;
  std::map<std::string, int> next_version_;
  std::map<std::string, typet> base_types_;
  std::vector<exec_object> objects_;
  std::map<std::uint32_t, std::size_t> object_index_;
  int malloc_serial_ = 0;

  struct frontier_record
  {
    std::string loop_id;
    exprt guard;
    int line;
    std::string function, file;
    bool recursion;
  };
  std::vector<frontier_record> frontiers_;

  // ---- symbol management ----

  std::string mint(const std::string &base, const typet &type, exec_state &s)
  {
    int v = ++next_version_[base];
    std::string name = base + "#" + std::to_string(v);
    trace_.decls[name] = type;
    base_types_[base] = type;
    s.versions[base] = v;
    return name;
  }

  exprt current(const std::string &base, const exec_state &s) const
  {
    auto it = s.versions.find(base);
    if(it == s.versions.end())
      throw encoding_error("use of undefined symbol " + base);
    auto t = base_types_.find(base);
    return ex::symbol(base + "#" + std::to_string(it->second), t->second);
  }

  bool defined(const std::string &base, const exec_state &s) const
  {
    return s.versions.count(base) != 0;
  }

  void define(const std::string &base, const typet &type, exprt rhs,
              exec_state &s, const uitem &item, const std::string &display = "")
  {
    std::string name = mint(base, type, s);
    ssa_step st;
    st.kind = ssa_step_kind::ASSIGNMENT;
    st.guard = s.guard;
    st.lhs = name;
    st.lhs_type = type;
    st.rhs = std::move(rhs);
    st.source_line = item.line ? item.line : item.instr.source_line;
    st.function = item.function;
    st.file = item.file;
    st.display = display;
    trace_.steps.push_back(std::move(st));
    check_step_budget();
  }

  // fresh unconstrained symbol (declaration, havoc, nondet)
  std::string make_free(
    const std::string &base,
    const typet &type,
    exec_state &s,
    const std::string &nondet_key)
  {
    std::string name = mint(base, type, s);
    trace_.free_symbols.insert(name);
    trace_.nondet_keys[name] = nondet_key;
    if(type->is_pointer())
    {
      std::vector<std::uint32_t> domain;
      for(const auto &o : objects_)
        domain.push_back(o.info.key);
      trace_.pointer_domains[name] = std::move(domain);
    }
    return name;
  }

  void check_step_budget()
  {
    if(static_cast<std::int64_t>(trace_.steps.size()) > opts_.step_budget)
      throw unwind_overflow();
  }

  // ---- state merging ----

  exprt guard_symbol(exprt g, exec_state &s, const uitem &item)
  {
    if(g->kind == expr_kind::SYMBOL || g->kind == expr_kind::CONSTANT)
      return g;
    std::string name = mint("@guard", ty::boolean(), s);
    ssa_step st;
    st.kind = ssa_step_kind::ASSIGNMENT;
    st.guard = ex::bool_const(true);
    st.lhs = name;
    st.lhs_type = ty::boolean();
    st.rhs = std::move(g);
    st.source_line = item.line;
    st.function = item.function;
    st.file = item.file;
    trace_.steps.push_back(std::move(st));
    check_step_budget();
    return ex::symbol(name, ty::boolean());
  }

  exec_state merge_states(std::vector<exec_state> states)
  {
    exec_state acc = std::move(states[0]);
    for(std::size_t i = 1; i < states.size(); i++)
      acc = merge_two(std::move(acc), std::move(states[i]));
    return acc;
  }

  exec_state merge_two(exec_state a, exec_state b)
  {
    exec_state out;
    out.alive = true;
    uitem dummy;
    out.guard = guard_symbol(ex::or_(a.guard, b.guard), out, dummy);

    for(const auto &[base, va] : a.versions)
    {
      auto itb = b.versions.find(base);
      if(itb == b.versions.end())
      {
        out.versions[base] = va;
        continue;
      }
      if(itb->second == va)
      {
        out.versions[base] = va;
        continue;
      }
      const typet &t = base_types_[base];
      exprt va_e = ex::symbol(base + "#" + std::to_string(va), t);
      exprt vb_e = ex::symbol(base + "#" + std::to_string(itb->second), t);
      define(base, t, ex::ite(a.guard, va_e, vb_e), out, dummy);
    }
    for(const auto &[base, vb] : b.versions)
      if(!out.versions.count(base) && !a.versions.count(base))
        out.versions[base] = vb;
    return out;
  }

  void deposit(std::size_t item_idx, exec_state state)
  {
    if(item_idx >= incoming_.size())
      return; // fell off the end of the trace
    incoming_[item_idx].push_back(std::move(state));
  }

  // ---- heap expansion ----

  const exec_object *object_by_key(std::uint32_t key) const
  {
    auto it = object_index_.find(key);
    return it == object_index_.end() ? nullptr : &objects_[it->second];
  }

  std::string live_base(const exec_object &o) const
  {
    return "@live_" + std::to_string(o.info.key);
  }
  std::string esc_base(const exec_object &o) const
  {
    return "@esc_" + std::to_string(o.info.key);
  }
  std::string mem_base(const exec_object &o, int field) const
  {
    return "@mem_" + std::to_string(o.info.key) + "_f" + std::to_string(field);
  }

  exprt count_expr(const exec_object &o) const
  {
    if(o.info.count_const >= 0)
      return ex::int_const(o.info.count_const, ty::sint(64));
    return ex::symbol(o.info.count_symbol, ty::sint(64));
  }

  bool field_compatible(const exec_object &o, const typet &pointee, int field) const
  {
    if(field >= 0)
      return o.info.elem_type->is_struct() &&
             field < static_cast<int>(o.info.field_types.size()) &&
             same_type(o.info.field_types[static_cast<std::size_t>(field)], pointee);
    return !o.info.elem_type->is_struct() && same_type(o.info.elem_type, pointee);
  }

  // live ∧ 0 <= off < count, for a given object
  exprt object_ok(const exec_object &o, const exprt &obj, const exprt &off64,
                  const exec_state &s) const
  {
    exprt match = ex::eq(obj, ex::int_const(static_cast<std::int64_t>(o.info.key), ty::uint(32)));
    exprt live = current(live_base(o), s);
    exprt lo = ex::binary(binary_op::GE, off64, ex::int_const(0, ty::sint(64)), ty::boolean());
    exprt hi = ex::binary(binary_op::LT, off64, count_expr(o), ty::boolean());
    return ex::and_(match, ex::and_(live, ex::and_(lo, hi)));
  }

  exprt off64_of(const exprt &pointer) const
  {
    return ex::cast(ex::ptr_off(pointer), ty::sint(64));
  }

  // rewrite a GOTO-level expression into SSA form under the state
  exprt rebind(const exprt &e, const exec_state &s)
  {
    if(!e)
      return e;
    switch(e->kind)
    {
    case expr_kind::CONSTANT:
      return e;
    case expr_kind::SYMBOL:
      return current(e->symbol, s);
    case expr_kind::INDEX:
    {
      exprt arr = current(e->args[0]->symbol, s);
      exprt idx = rebind(e->args[1], s);
      return ex::index(arr, idx);
    }
    case expr_kind::DEREF:
    {
      exprt p = rebind(e->args[0], s);
      exprt obj = ex::ptr_obj(p);
      exprt off64 = off64_of(p);
      exprt off32 = ex::ptr_off(p);
      exprt result = ex::constant(0, e->type); // default for bad derefs
      const typet pointee = e->type;
      for(const auto &o : objects_)
      {
        if(!field_compatible(o, pointee, e->field))
          continue;
        int field = e->field >= 0 ? e->field : 0;
        exprt cell = ex::index(current(mem_base(o, field), s), off32);
        result = ex::ite(object_ok(o, obj, off64, s), cell, result);
      }
      return result;
    }
    case expr_kind::VALID_DEREF:
    {
      exprt p = rebind(e->args[0], s);
      const typet &pointee = e->args[0]->type->sub;
      exprt obj = ex::ptr_obj(p);
      exprt off64 = off64_of(p);
      exprt any = ex::bool_const(false);
      for(const auto &o : objects_)
      {
        bool ok = pointee->is_struct()
          ? (o.info.elem_type->is_struct() &&
             o.info.elem_type->struct_name == pointee->struct_name)
          : field_compatible(o, pointee, -1);
        if(!ok)
          continue;
        any = ex::or_(any, object_ok(o, obj, off64, s));
      }
      return any;
    }
    case expr_kind::CAN_FREE:
    {
      exprt p = rebind(e->args[0], s);
      exprt obj = ex::ptr_obj(p);
      exprt is_null = ex::eq(obj, ex::int_const(0, ty::uint(32)));
      exprt ok = is_null;
      for(const auto &o : objects_)
      {
        exprt match =
          ex::eq(obj, ex::int_const(static_cast<std::int64_t>(o.info.key), ty::uint(32)));
        exprt live = current(live_base(o), s);
        exprt at_base =
          ex::eq(ex::ptr_off(p), ex::int_const(0, ty::sint(32)));
        ok = ex::or_(ok, ex::and_(match, ex::and_(live, at_base)));
      }
      return ok;
    }
    default:
    {
      if(e->args.empty())
        return e;
      auto n = std::make_shared<expr_node>(*e);
      for(auto &a : n->args)
        a = rebind(a, s);
      return n;
    }
    }
  }

  // ---- step emission ----

  void emit_assumption(exprt cond, exec_state &s, const uitem &item)
  {
    ssa_step st;
    st.kind = ssa_step_kind::ASSUMPTION;
    st.guard = s.guard;
    st.cond = std::move(cond);
    st.source_line = item.line ? item.line : item.instr.source_line;
    st.function = item.function;
    st.file = item.file;
    trace_.steps.push_back(std::move(st));
    check_step_budget();
  }

  void emit_claim(
    exprt cond,
    property_class pc,
    const std::string &detail,
    exec_state &s,
    const uitem &item)
  {
    if(mode_ == symex_mode::FORWARD_CONDITION)
      return; // no safety properties in F(k)
    if(item.claims_assumed)
    {
      emit_assumption(std::move(cond), s, item);
      return;
    }
    ssa_step st;
    st.kind = ssa_step_kind::CLAIM;
    st.guard = s.guard;
    st.cond = std::move(cond);
    st.property = pc;
    st.detail = detail;
    st.source_line = item.line ? item.line : item.instr.source_line;
    st.function = item.function;
    st.file = item.file;
    trace_.steps.push_back(std::move(st));
    check_step_budget();
  }

  // ---- item processing ----

  void process(const uitem &item, exec_state &s, std::size_t idx)
  {
    switch(item.kind)
    {
    case item_kind::FRONTIER:
    {
      frontier_record fr;
      fr.loop_id = item.loop_id;
      fr.guard = s.guard;
      fr.line = item.line;
      fr.function = item.function;
      fr.file = item.file;
      fr.recursion = item.recursion;
      frontiers_.push_back(std::move(fr));
      if(item.recursion && mode_ == symex_mode::INDUCTIVE_STEP)
        trace_.recursion_frontier_hit = true;
      return; // the state dies here
    }

    case item_kind::HAVOC_SET:
      process_havoc_set(item, s, idx);
      return;

    case item_kind::LEAK_CHECK:
      process_leak_check(item, s, idx);
      return;

    case item_kind::NORMAL:
      process_instr(item, s, idx);
      return;
    }
  }

  void process_havoc_set(const uitem &item, exec_state &s, std::size_t idx)
  {
    for(const auto &[name, declared] : item.havoc_vars)
    {
      (void)declared;
      if(!defined(name, s))
        continue;
      const typet &t = base_types_[name];
      std::string key = item.ctx + ".H." + name;
      std::string sym = make_free(name, t, s, key);
      trace_.havocked.insert(sym);
    }
    if(item.havoc_heap)
    {
      for(const auto &o : objects_)
      {
        std::string lb = live_base(o);
        if(defined(lb, s))
        {
          std::string sym = make_free(lb, ty::boolean(), s, item.ctx + ".H." + lb);
          trace_.havocked.insert(sym);
        }
        for(std::size_t f = 0; f < o.cell_types.size(); f++)
        {
          std::string mb = mem_base(o, static_cast<int>(f));
          if(defined(mb, s))
          {
            std::string sym =
              make_free(mb, base_types_[mb], s, item.ctx + ".H." + mb);
            trace_.havocked.insert(sym);
          }
        }
      }
    }
    // assume every rebindable safety claim at the havocked entry state
    for(const auto &c : item.entry_assume)
    {
      try
      {
        exprt cond = rebind(c, s);
        emit_assumption(std::move(cond), s, item);
      }
      catch(const encoding_error &)
      {
        // references a variable not yet in scope here
      }
    }
    deposit(idx + 1, std::move(s));
  }

  void process_leak_check(const uitem &item, exec_state &s, std::size_t idx)
  {
    if(!item.ret_symbol.empty() && defined(item.ret_symbol, s))
    {
      exprt ret = current(item.ret_symbol, s);
      for(const auto &o : objects_)
      {
        exprt match = ex::eq(
          ex::ptr_obj(ret),
          ex::int_const(static_cast<std::int64_t>(o.info.key), ty::uint(32)));
        exprt esc = current(esc_base(o), s);
        define(esc_base(o), ty::boolean(), ex::or_(esc, match), s,
               item);
      }
    }
    if(item.check_leaks && mode_ != symex_mode::FORWARD_CONDITION)
    {
      for(const auto &o : objects_)
      {
        if(o.info.param || o.info.owner != item.owner)
          continue;
        exprt live = current(live_base(o), s);
        exprt esc = current(esc_base(o), s);
        uitem claim_item = item;
        claim_item.line = o.info.alloc_line;
        emit_claim(
          ex::or_(ex::not_(live), esc),
          property_class::MEMORY_LEAK,
          o.info.label,
          s,
          claim_item);
      }
    }
    deposit(idx + 1, std::move(s));
  }

  void process_instr(const uitem &item, exec_state &s, std::size_t idx)
  {
    const goto_instruction &in = item.instr;
    switch(in.kind)
    {
    case goto_kind::DECL:
    {
      std::string key = item.ctx + ".I" + std::to_string(in.index);
      make_free(in.symbol, in.decl_type, s, key);
      break;
    }
    case goto_kind::HAVOC:
    {
      std::string key = item.ctx + ".I" + std::to_string(in.index);
      typet t = in.decl_type;
      if(!t && defined(in.symbol, s))
        t = base_types_[in.symbol];
      std::string sym = make_free(in.symbol, t, s, key);
      std::string disp = display_of(in.symbol);
      if(!disp.empty())
      {
        free_event ev;
        ev.symbol = sym;
        ev.display = disp;
        ev.source_line = in.source_line;
        ev.function = item.function;
        ev.file = item.file;
        ev.at_step = trace_.steps.size();
        trace_.free_events.push_back(std::move(ev));
      }
      break;
    }
    case goto_kind::ASSIGN:
      exec_assign(in, item, s);
      break;
    case goto_kind::ASSUME:
      emit_assumption(rebind(in.rhs, s), s, item);
      break;
    case goto_kind::ASSERT:
      emit_claim(rebind(in.rhs, s), in.property, in.detail, s, item);
      break;
    case goto_kind::GOTO:
    {
      exprt cond = rebind(in.guard, s);
      if(is_true(cond))
      {
        deposit(static_cast<std::size_t>(item.utarget), std::move(s));
        return;
      }
      if(is_false(cond))
        break;
      exec_state taken = s;
      uitem dummy = item;
      taken.guard = guard_symbol(ex::and_(s.guard, cond), taken, dummy);
      deposit(static_cast<std::size_t>(item.utarget), std::move(taken));
      s.guard = guard_symbol(ex::and_(s.guard, ex::not_(cond)), s, dummy);
      break;
    }
    case goto_kind::MALLOC:
      exec_malloc(in, item, s);
      break;
    case goto_kind::FREE:
      exec_free(in, item, s);
      break;
    case goto_kind::FUNCTION_CALL:
      throw encoding_error("unexpanded call in trace");
    case goto_kind::END:
      throw encoding_error("unexpected END item");
    }
    deposit(idx + 1, std::move(s));
  }

  void exec_assign(const goto_instruction &in, const uitem &item, exec_state &s)
  {
    exprt value = rebind(in.rhs, s);
    const exprt &lv = in.lhs;
    switch(lv->kind)
    {
    case expr_kind::SYMBOL:
    {
      if(!base_types_.count(lv->symbol))
        base_types_[lv->symbol] = lv->type;
      define(lv->symbol, lv->type, std::move(value), s,
             item, display_of(lv->symbol));
      return;
    }
    case expr_kind::INDEX:
    {
      const std::string &base = lv->args[0]->symbol;
      exprt arr = current(base, s);
      exprt idx = rebind(lv->args[1], s);
      // out-of-range stores are dropped, matching the concrete rules
      std::int64_t len = arr->type->array_length;
      exprt in_range = ex::and_(
        ex::binary(binary_op::GE, idx, ex::int_const(0, idx->type), ty::boolean()),
        ex::binary(binary_op::LT, idx, ex::int_const(len, idx->type), ty::boolean()));
      exprt stored = ex::store(arr, idx, value);
      define(base, arr->type, ex::ite(in_range, stored, arr), s,
             item, display_of(base));
      return;
    }
    case expr_kind::DEREF:
    {
      exprt p = rebind(lv->args[0], s);
      exprt obj = ex::ptr_obj(p);
      exprt off64 = off64_of(p);
      exprt off32 = ex::ptr_off(p);
      for(const auto &o : objects_)
      {
        if(!field_compatible(o, lv->type, lv->field))
          continue;
        int field = lv->field >= 0 ? lv->field : 0;
        std::string mb = mem_base(o, field);
        exprt mem = current(mb, s);
        exprt ok = object_ok(o, obj, off64, s);
        define(mb, mem->type, ex::ite(ok, ex::store(mem, off32, value), mem), s,
               item);
        if(lv->type->is_pointer())
        {
          // a pointer stored into the heap escapes its object
          for(const auto &t : objects_)
          {
            exprt match = ex::eq(
              ex::ptr_obj(value),
              ex::int_const(static_cast<std::int64_t>(t.info.key), ty::uint(32)));
            exprt esc = current(esc_base(t), s);
            define(esc_base(t), ty::boolean(),
                   ex::or_(esc, ex::and_(ok, match)), s, item);
          }
        }
      }
      return;
    }
    default:
      throw encoding_error("bad assignment target in trace");
    }
  }

  std::string display_of(const std::string &mangled) const
  {
    auto pos = mangled.rfind("::");
    std::string name = pos == std::string::npos ? mangled : mangled.substr(pos + 2);
    if(!name.empty() && (name[0] == '@' || name[0] == '_'))
      return "";
    auto dollar = name.find('$');
    return dollar == std::string::npos ? name : name.substr(0, dollar);
  }

  void exec_malloc(const goto_instruction &in, const uitem &item, exec_state &s)
  {
    std::string ctx_key = item.ctx + ".I" + std::to_string(in.index);
    std::uint32_t key = object_key_from_string(ctx_key);
    if(const exec_object *clash = object_by_key(key))
      if(clash->info.ctx_key != ctx_key)
        throw encoding_error("object key collision: " + ctx_key);

    exec_object o;
    o.info.key = key;
    o.info.ctx_key = ctx_key;
    o.info.label = "dynamic_" + std::to_string(++malloc_serial_) + "_array";
    o.info.elem_type = in.alloc_type;
    o.info.param = in.param_object;
    o.info.alloc_line = in.source_line;
    o.info.owner = item.owner;

    std::int64_t elem_size = size_of(in.alloc_type, model_.structs);
    if(in.alloc_type->is_struct())
    {
      const struct_def *def = model_.structs.find(in.alloc_type->struct_name);
      if(!def)
        throw encoding_error("unknown struct in malloc");
      for(const auto &f : def->fields)
      {
        o.info.field_types.push_back(f.type);
        o.cell_types.push_back(f.type);
      }
    }
    else
    {
      o.info.field_types.push_back(in.alloc_type);
      o.cell_types.push_back(in.alloc_type);
    }

    // element count
    exprt size_e = rebind(in.rhs, s);
    if(in.param_object)
      o.info.count_const = 1;
    else if(size_e->kind == expr_kind::CONSTANT && elem_size > 0)
      o.info.count_const = static_cast<std::int64_t>(size_e->bits) / elem_size;
    else
      o.info.count_const = -1;

    objects_.push_back(o);
    object_index_[key] = objects_.size() - 1;
    exec_object &obj = objects_.back();

    if(obj.info.count_const < 0)
    {
      exprt cnt = ex::binary(
        binary_op::DIV,
        ex::cast(size_e, ty::sint(64)),
        ex::int_const(elem_size > 0 ? elem_size : 1, ty::sint(64)),
        ty::sint(64));
      define("@cnt_" + std::to_string(key), ty::sint(64), cnt, s,
             item);
      obj.info.count_symbol =
        "@cnt_" + std::to_string(key) + "#" +
        std::to_string(s.versions["@cnt_" + std::to_string(key)]);
    }

    // liveness starts as the path guard: on other paths the object was
    // never allocated
    define(live_base(obj), ty::boolean(), s.guard, s, item);
    define(esc_base(obj), ty::boolean(), ex::bool_const(false), s,
           item);

    // contents are indeterminate
    for(std::size_t f = 0; f < obj.cell_types.size(); f++)
    {
      std::int64_t len = obj.info.count_const >= 0 ? obj.info.count_const : 0;
      typet arr_t = ty::array(obj.cell_types[f], len);
      std::string key_str = ctx_key + ".f" + std::to_string(f);
      make_free(mem_base(obj, static_cast<int>(f)), arr_t, s, key_str);
    }

    // the result pointer
    exprt pv = ex::constant(make_pointer_bits(key, 0), in.lhs->type);
    if(in.lhs->kind == expr_kind::SYMBOL)
    {
      if(!base_types_.count(in.lhs->symbol))
        base_types_[in.lhs->symbol] = in.lhs->type;
      define(in.lhs->symbol, in.lhs->type, pv, s, item,
             display_of(in.lhs->symbol));
    }
    else
    {
      goto_instruction store = in;
      store.kind = goto_kind::ASSIGN;
      store.rhs = nullptr;
      uitem tmp = item;
      tmp.instr = store;
      tmp.instr.rhs = pv;
      exec_assign(tmp.instr, tmp, s);
    }
  }

  void exec_free(const goto_instruction &in, const uitem &item, exec_state &s)
  {
    exprt p = rebind(in.rhs, s);
    exprt obj = ex::ptr_obj(p);
    exprt at_base = ex::eq(ex::ptr_off(p), ex::int_const(0, ty::sint(32)));
    for(const auto &o : objects_)
    {
      exprt match = ex::eq(
        obj, ex::int_const(static_cast<std::int64_t>(o.info.key), ty::uint(32)));
      exprt live = current(live_base(o), s);
      exprt clears = ex::and_(s.guard, ex::and_(match, ex::and_(live, at_base)));
      define(live_base(o), ty::boolean(),
             ex::ite(clears, ex::bool_const(false), live), s,
             item);
    }
  }

  void finalize_unwinding_claims()
  {
    bool claims_enabled =
      mode_ == symex_mode::FORWARD_CONDITION || opts_.unwinding_claims;
    if(!claims_enabled)
      return;

    // one claim per static loop head, in order of first appearance
    std::vector<std::string> order;
    std::map<std::string, exprt> merged;
    std::map<std::string, const frontier_record *> meta;
    for(const auto &fr : frontiers_)
    {
      auto it = merged.find(fr.loop_id);
      if(it == merged.end())
      {
        order.push_back(fr.loop_id);
        merged[fr.loop_id] = fr.guard;
        meta[fr.loop_id] = &fr;
      }
      else
        it->second = ex::or_(it->second, fr.guard);
    }

    int number = 0;
    for(const auto &id : order)
    {
      const frontier_record *fr = meta[id];
      number++;
      ssa_step st;
      st.kind = ssa_step_kind::CLAIM;
      st.guard = ex::bool_const(true);
      st.cond = ex::not_(merged[id]);
      st.property = property_class::UNWINDING;
      st.detail = std::to_string(number);
      st.source_line = fr->line;
      st.function = fr->function;
      st.file = fr->file;
      st.unwinding = true;
      st.loop_id = id;
      trace_.unwinding_claim_steps.push_back(trace_.steps.size());
      trace_.steps.push_back(std::move(st));
    }
  }
};

} // namespace

ssa_trace unroll(
  const goto_model &model,
  const std::string &entry,
  int k,
  symex_mode mode,
  const unroll_options &opts)
{
  if(k < 1)
    throw encoding_error("unwind bound must be >= 1");
  planner p(model, k, mode, opts);
  std::vector<uitem> items = p.plan(entry);
  executor ex(model, std::move(items), k, mode, opts);
  ssa_trace trace = ex.run();

  // copy object metadata out of the executor via the trace
  return trace;
}

} // namespace kbmc
