#include "replay/replay.h"

#include <algorithm>

#include "util/errors.h"

namespace kbmc
{

bool is_crash_equivalent(property_class pc)
{
  switch(pc)
  {
  case property_class::NULL_DEREF:
  case property_class::INVALID_POINTER:
  case property_class::DOUBLE_FREE:
  case property_class::DIV_BY_ZERO:
  case property_class::BUFFER_OVERFLOW: // out-of-bounds write
  case property_class::USER_ASSERT:     // assert() aborts
    return true;
  case property_class::IMPROPER_BUFFER_ACCESS:
  case property_class::MEMORY_LEAK:
  case property_class::ARITH_OVERFLOW_ADD:
  case property_class::ARITH_OVERFLOW_SUB:
  case property_class::ARITH_OVERFLOW_MUL:
  case property_class::ARITH_OVERFLOW_SHL:
  case property_class::UNWINDING:
    return false;
  }
  return false;
}

replay_result replay(
  const goto_model &prepared,
  const std::string &entry,
  const counterexample &cex)
{
  map_nondet_source source;
  source.values = cex.nondet_values;
  source.fail_on_missing = true;

  interp_options opts;
  interp_result run = interpret(prepared, entry, source, opts);

  replay_result r;
  switch(run.status)
  {
  case interp_status::VIOLATION:
  {
    const interp_violation &v = *run.violation;
    r.property = v.property;
    r.line = v.line;
    if(v.property == cex.violated.property && v.line == cex.violated.line)
    {
      r.outcome = replay_outcome::REPRODUCED;
      r.crash_equivalent = is_crash_equivalent(v.property);
    }
    else
    {
      r.outcome = replay_outcome::DIVERGED;
      r.reason = "different violation: " + v.rendered + " at line " +
                 std::to_string(v.line);
    }
    return r;
  }

  case interp_status::FINISHED:
    // an unwinding counterexample has no concrete failure; it
    // reproduces when the loop indeed outlives the bound
    if(cex.violated.property == property_class::UNWINDING &&
       run.max_depth_seen > cex.depth)
    {
      r.outcome = replay_outcome::REPRODUCED;
      r.property = property_class::UNWINDING;
      r.line = cex.violated.line;
      r.crash_equivalent = false;
      return r;
    }
    r.outcome = replay_outcome::DIVERGED;
    r.reason = "claim passed";
    return r;

  case interp_status::ASSUME_FALSE:
    r.outcome = replay_outcome::DIVERGED;
    r.reason = "assumption failed during replay";
    return r;

  case interp_status::STEP_LIMIT:
    if(cex.violated.property == property_class::UNWINDING &&
       run.max_depth_seen > cex.depth)
    {
      r.outcome = replay_outcome::REPRODUCED;
      r.property = property_class::UNWINDING;
      r.line = cex.violated.line;
      return r;
    }
    r.outcome = replay_outcome::DIVERGED;
    r.reason = "step limit during replay";
    return r;

  case interp_status::NEED_NONDET:
    throw missing_assignment(run.pending_key);

  case interp_status::RUNTIME_ERROR:
    r.outcome = replay_outcome::DIVERGED;
    r.reason = "interpreter error";
    return r;
  }
  return r;
}

namespace
{

class exhaustive_driver
{
public:
  exhaustive_driver(
    const goto_model &model,
    const std::string &entry,
    int input_bound_bits,
    std::int64_t depth_bound)
    : model_(model),
      entry_(entry),
      input_bound_(input_bound_bits),
      depth_bound_(depth_bound)
  {
  }

  exhaustive_result run()
  {
    explore(0);
    exhaustive_result r;
    if(best_)
    {
      r.kind = exhaustive_kind::VIOLATION;
      r.property = best_->property;
      r.line = best_->line;
      r.depth = best_->depth;
    }
    return r;
  }

private:
  const goto_model &model_;
  const std::string &entry_;
  int input_bound_;
  std::int64_t depth_bound_;
  std::map<std::string, std::uint64_t> chosen_;
  std::optional<interp_violation> best_;

  static int width_of(const typet &t, std::size_t pointer_domain)
  {
    if(t->is_bool())
      return 1;
    if(t->is_pointer())
    {
      int bits = 1;
      while((std::size_t(1) << bits) < pointer_domain)
        bits++;
      return bits;
    }
    return t->width;
  }

  void explore(int bits_used)
  {
    map_nondet_source source;
    source.values = chosen_;
    source.fail_on_missing = false;

    interp_options opts;
    opts.step_limit = depth_bound_;
    interp_result run = interpret(model_, entry_, source, opts);

    switch(run.status)
    {
    case interp_status::VIOLATION:
      if(!best_ || run.violation->depth < best_->depth)
        best_ = run.violation;
      return;

    case interp_status::FINISHED:
    case interp_status::ASSUME_FALSE:
      return;

    case interp_status::STEP_LIMIT:
      throw budget_exceeded("exhaustive check: path exceeded the step budget");

    case interp_status::RUNTIME_ERROR:
      throw budget_exceeded("exhaustive check: interpreter error");

    case interp_status::NEED_NONDET:
    {
      std::vector<std::uint64_t> domain;
      const typet &t = run.pending_type;
      if(t->is_bool())
        domain = {0, 1};
      else if(t->is_pointer())
        domain = run.pending_pointer_domain;
      else
      {
        if(t->width > 24)
          throw budget_exceeded(
            "exhaustive check: input " + run.pending_key + " too wide");
        for(std::uint64_t v = 0; v < (std::uint64_t(1) << t->width); v++)
          domain.push_back(v);
      }
      int bits = width_of(t, domain.size());
      if(bits_used + bits > input_bound_)
        throw budget_exceeded("exhaustive check: input space over budget");
      for(std::uint64_t v : domain)
      {
        chosen_[run.pending_key] = v;
        explore(bits_used + bits);
      }
      chosen_.erase(run.pending_key);
      return;
    }
    }
  }
};

} // namespace

exhaustive_result exhaustive_check(
  const goto_model &prepared,
  const std::string &entry,
  int input_bound_bits,
  std::int64_t depth_bound)
{
  exhaustive_driver d(prepared, entry, input_bound_bits, depth_bound);
  return d.run();
}

} // namespace kbmc
