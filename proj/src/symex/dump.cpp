#include "symex/dump.h"

#include <sstream>

namespace kbmc
{

std::string dump_trace(const ssa_trace &t)
{
  std::ostringstream os;
  os << "mode " << symex_mode_name(t.mode) << " k " << t.unwind_bound << "\n";
  for(const auto &st : t.steps)
  {
    os << "{" << expr_to_string(st.guard) << "} ";
    switch(st.kind)
    {
    case ssa_step_kind::ASSIGNMENT:
      os << "ASSIGN " << st.lhs << " := " << expr_to_string(st.rhs);
      break;
    case ssa_step_kind::ASSUMPTION:
      os << "ASSUME " << expr_to_string(st.cond);
      break;
    case ssa_step_kind::CLAIM:
      os << "CLAIM [" << property_class_name(st.property) << " line "
         << st.source_line << "] " << expr_to_string(st.cond);
      break;
    }
    os << "\n";
  }
  return os.str();
}

} // namespace kbmc
