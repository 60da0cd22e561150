#include "vcgen/enumerator.h"

#include <algorithm>

#include "util/arith.h"
#include "util/errors.h"

namespace kbmc
{

namespace
{

struct enum_unsupported
{
  std::string reason;
};

struct need_value
{
  std::string key;   // symbol, or origin[index] for array cells
  typet type;
  std::string origin; // array symbol for cells, else the symbol itself
};

struct evalue
{
  bool is_array = false;
  std::uint64_t scalar = 0;

  std::string origin;                    // free backing store, "" if none
  std::map<std::int64_t, std::uint64_t> stored;
  std::int64_t length = -1;              // -1 when not statically known
  typet cell_type;
};

class enum_solver
{
public:
  enum_solver(const formula &f, const enum_options &opts) : f_(f), opts_(opts)
  {
  }

  solver_verdict solve()
  {
    solver_verdict v;
    try
    {
      if(dfs(0))
      {
        v.status = solver_status::SAT;
        v.model = build_model();
        v.violated_claim = violated_;
      }
      else
        v.status = solver_status::UNSAT;
    }
    catch(const enum_unsupported &u)
    {
      v.status = solver_status::UNKNOWN;
      v.reason = u.reason;
    }
    catch(const budget_exceeded &b)
    {
      v.status = solver_status::UNKNOWN;
      v.reason = b.what();
    }
    return v;
  }

private:
  const formula &f_;
  const enum_options &opts_;
  std::map<std::string, evalue> env_;
  std::map<std::string, std::uint64_t> chosen_;
  std::int64_t nodes_ = 0;
  std::size_t violated_ = 0;

  void budget_tick()
  {
    if(++nodes_ > opts_.node_budget)
      throw budget_exceeded("enumeration budget exhausted");
    if((nodes_ & 0xFFFF) == 0 && opts_.timeout && opts_.timeout->expired())
      throw budget_exceeded("timeout");
  }

  std::uint64_t free_scalar(const std::string &key, const typet &type, const std::string &origin)
  {
    auto it = chosen_.find(key);
    if(it != chosen_.end())
      return it->second;
    throw need_value{key, type, origin};
  }

  evalue eval(const exprt &e)
  {
    budget_tick();
    evalue out;
    switch(e->kind)
    {
    case expr_kind::CONSTANT:
      out.scalar = e->bits;
      return out;

    case expr_kind::SYMBOL:
    {
      auto it = env_.find(e->symbol);
      if(it != env_.end())
        return it->second;
      // a free symbol
      if(e->type->is_array())
      {
        out.is_array = true;
        out.origin = e->symbol;
        out.length = e->type->array_length;
        out.cell_type = e->type->sub;
        return out;
      }
      out.scalar = free_scalar(e->symbol, e->type, e->symbol);
      return out;
    }

    case expr_kind::UNARY:
      out.scalar = eval_unary_bits(e->uop, eval(e->args[0]).scalar, e->args[0]->type);
      return out;

    case expr_kind::BINARY:
    {
      std::uint64_t a = eval(e->args[0]).scalar;
      std::uint64_t b = eval(e->args[1]).scalar;
      out.scalar = eval_binary_bits(e->bop, a, b, e->args[0]->type);
      return out;
    }

    case expr_kind::ITE:
    {
      if(e->type->is_array())
        return eval(e->args[0]).scalar != 0 ? eval(e->args[1]) : eval(e->args[2]);
      out.scalar = eval(e->args[0]).scalar != 0 ? eval(e->args[1]).scalar
                                                : eval(e->args[2]).scalar;
      return out;
    }

    case expr_kind::CAST:
      out.scalar = convert_bits(eval(e->args[0]).scalar, e->args[0]->type, e->type);
      return out;

    case expr_kind::NO_OVERFLOW:
    {
      std::uint64_t a = eval(e->args[0]).scalar;
      std::uint64_t b = eval(e->args[1]).scalar;
      out.scalar = no_signed_overflow(e->bop, a, b, e->args[0]->type) ? 1 : 0;
      return out;
    }

    case expr_kind::PTR_OBJ:
      out.scalar = pointer_obj(eval(e->args[0]).scalar);
      return out;

    case expr_kind::PTR_OFF:
      out.scalar = static_cast<std::uint32_t>(pointer_off(eval(e->args[0]).scalar));
      return out;

    case expr_kind::INDEX:
    {
      evalue arr = eval(e->args[0]);
      std::int64_t idx =
        bits_to_signed(eval(e->args[1]).scalar, e->args[1]->type);
      out.scalar = select_cell(arr, idx, e->type);
      return out;
    }

    case expr_kind::STORE:
    {
      evalue arr = eval(e->args[0]);
      std::int64_t idx =
        bits_to_signed(eval(e->args[1]).scalar, e->args[1]->type);
      std::uint64_t val = eval(e->args[2]).scalar;
      if(arr.length >= 0 && (idx < 0 || idx >= arr.length))
        return arr; // dropped, like the concrete semantics
      arr.stored[idx] = val;
      return arr;
    }

    default:
      throw enum_unsupported{"unsupported operator in formula"};
    }
  }

  std::uint64_t select_cell(const evalue &arr, std::int64_t idx, const typet &cell_type)
  {
    if(arr.length >= 0 && (idx < 0 || idx >= arr.length))
      return 0; // out-of-range reads yield the default value
    auto it = arr.stored.find(idx);
    if(it != arr.stored.end())
      return it->second;
    if(arr.origin.empty())
      return 0;
    std::string key = arr.origin + "[" + std::to_string(idx) + "]";
    return free_scalar(key, cell_type ? cell_type : arr.cell_type, arr.origin);
  }

  std::vector<std::uint64_t> domain_of(const need_value &nv)
  {
    const typet &t = nv.type;
    std::vector<std::uint64_t> dom;
    if(t->is_bool())
    {
      dom = {0, 1};
      return dom;
    }
    if(t->is_integer())
    {
      if(t->width > opts_.max_free_bits)
        throw enum_unsupported{
          "free symbol " + nv.key + " too wide for enumeration (" +
          std::to_string(t->width) + " bits)"};
      std::uint64_t n = std::uint64_t(1) << t->width;
      dom.reserve(n);
      for(std::uint64_t v = 0; v < n; v++)
        dom.push_back(v);
      return dom;
    }
    if(t->is_pointer())
    {
      dom.push_back(make_pointer_bits(OBJ_NULL, 0));
      auto it = f_.pointer_domains.find(nv.origin);
      if(it != f_.pointer_domains.end())
        for(std::uint32_t key : it->second)
        {
          std::int64_t count = 0;
          for(const auto &o : f_.objects)
            if(o.key == key)
              count = o.count_const >= 0 ? o.count_const : 0;
          for(std::int64_t off = 0; off <= count; off++)
            dom.push_back(make_pointer_bits(key, static_cast<std::int32_t>(off)));
        }
      dom.push_back(make_pointer_bits(OBJ_INVALID, 0));
      return dom;
    }
    throw enum_unsupported{"free symbol " + nv.key + " has no enumerable domain"};
  }

  bool dfs(std::size_t idx)
  {
    for(std::size_t i = idx; i < f_.items.size(); i++)
    {
      const auto &item = f_.items[i];
      try
      {
        switch(item.kind)
        {
        case formula::item_kind::DEFINE:
          env_[item.lhs] = eval(item.expr);
          break;
        case formula::item_kind::CONSTRAIN:
          if(eval(item.expr).scalar == 0)
            return false;
          break;
        case formula::item_kind::VIOLATION:
          if(eval(item.expr).scalar != 0)
          {
            violated_ = i;
            return true;
          }
          break;
        }
      }
      catch(const need_value &nv)
      {
        for(std::uint64_t v : domain_of(nv))
        {
          chosen_[nv.key] = v;
          if(dfs(i))
            return true;
        }
        chosen_.erase(nv.key);
        return false;
      }
    }
    return false;
  }

  modelt build_model()
  {
    // complete the run past the violation so every define has a value;
    // unread free symbols default to zero
    for(std::size_t i = 0; i < f_.items.size(); i++)
    {
      const auto &item = f_.items[i];
      if(item.kind != formula::item_kind::DEFINE)
        continue;
      for(;;)
      {
        try
        {
          env_[item.lhs] = eval(item.expr);
          break;
        }
        catch(const need_value &nv)
        {
          chosen_[nv.key] = 0;
        }
      }
    }

    modelt model;
    for(const auto &[name, type] : f_.decls)
    {
      model_value mv;
      auto it = env_.find(name);
      if(it != env_.end())
      {
        const evalue &ev = it->second;
        if(ev.is_array)
        {
          mv.is_array = true;
          std::int64_t len = ev.length;
          if(len < 0)
          {
            for(const auto &[i, v] : ev.stored)
              len = std::max(len, i + 1);
            len = std::max<std::int64_t>(len, 0);
          }
          for(std::int64_t i = 0; i < len; i++)
          {
            std::uint64_t v = 0;
            auto st = ev.stored.find(i);
            if(st != ev.stored.end())
              v = st->second;
            else if(!ev.origin.empty())
            {
              auto ch = chosen_.find(ev.origin + "[" + std::to_string(i) + "]");
              if(ch != chosen_.end())
                v = ch->second;
            }
            mv.cells.push_back(v);
          }
        }
        else
          mv.scalar = ev.scalar;
        model[name] = std::move(mv);
        continue;
      }
      // free, possibly untouched
      if(type->is_array())
      {
        mv.is_array = true;
        for(std::int64_t i = 0; i < type->array_length; i++)
        {
          auto ch = chosen_.find(name + "[" + std::to_string(i) + "]");
          mv.cells.push_back(ch != chosen_.end() ? ch->second : 0);
        }
      }
      else
      {
        auto ch = chosen_.find(name);
        mv.scalar = ch != chosen_.end() ? ch->second : 0;
      }
      model[name] = std::move(mv);
    }
    return model;
  }
};

} // namespace

solver_verdict solve_with_enumerator(const formula &f, const enum_options &opts)
{
  enum_solver s(f, opts);
  return s.solve();
}

std::uint64_t eval_under_model(const exprt &e, const modelt &model)
{
  switch(e->kind)
  {
  case expr_kind::CONSTANT:
    return e->bits;
  case expr_kind::SYMBOL:
  {
    auto it = model.find(e->symbol);
    return it == model.end() ? 0 : it->second.scalar;
  }
  case expr_kind::UNARY:
    return eval_unary_bits(e->uop, eval_under_model(e->args[0], model), e->args[0]->type);
  case expr_kind::BINARY:
    return eval_binary_bits(
      e->bop,
      eval_under_model(e->args[0], model),
      eval_under_model(e->args[1], model),
      e->args[0]->type);
  case expr_kind::ITE:
    return eval_under_model(e->args[0], model) != 0
             ? eval_under_model(e->args[1], model)
             : eval_under_model(e->args[2], model);
  case expr_kind::CAST:
    return convert_bits(
      eval_under_model(e->args[0], model), e->args[0]->type, e->type);
  case expr_kind::NO_OVERFLOW:
    return no_signed_overflow(
             e->bop,
             eval_under_model(e->args[0], model),
             eval_under_model(e->args[1], model),
             e->args[0]->type)
             ? 1
             : 0;
  case expr_kind::PTR_OBJ:
    return pointer_obj(eval_under_model(e->args[0], model));
  case expr_kind::PTR_OFF:
    return static_cast<std::uint32_t>(pointer_off(eval_under_model(e->args[0], model)));
  case expr_kind::INDEX:
  {
    // array symbols possibly behind stores
    exprt arr = e->args[0];
    std::int64_t idx =
      bits_to_signed(eval_under_model(e->args[1], model), e->args[1]->type);
    for(;;)
    {
      if(arr->kind == expr_kind::STORE)
      {
        std::int64_t sidx =
          bits_to_signed(eval_under_model(arr->args[1], model), arr->args[1]->type);
        if(sidx == idx)
          return eval_under_model(arr->args[2], model);
        arr = arr->args[0];
        continue;
      }
      if(arr->kind == expr_kind::ITE)
      {
        arr = eval_under_model(arr->args[0], model) != 0 ? arr->args[1] : arr->args[2];
        continue;
      }
      break;
    }
    if(arr->kind == expr_kind::SYMBOL)
    {
      auto it = model.find(arr->symbol);
      if(it != model.end() && it->second.is_array && idx >= 0 &&
         idx < static_cast<std::int64_t>(it->second.cells.size()))
        return it->second.cells[static_cast<std::size_t>(idx)];
    }
    return 0;
  }
  default:
    return 0;
  }
}

} // namespace kbmc
