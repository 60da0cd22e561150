#include "vcgen/counterexample.h"

#include <sstream>

#include <json.hpp>

namespace kbmc
{

namespace
{

const char *pc_tag(property_class pc)
{
  return property_class_name(pc);
}

property_class pc_from_tag(const std::string &s)
{
  for(int i = 0; i <= static_cast<int>(property_class::UNWINDING); i++)
  {
    auto pc = static_cast<property_class>(i);
    if(s == property_class_name(pc))
      return pc;
  }
  return property_class::USER_ASSERT;
}

} // namespace

std::string counterexample::to_json() const
{
  nlohmann::json j;
  j["source_file"] = source_file;
  j["function"] = function;
  j["depth"] = depth;
  j["checks"] = {
    {"memory_leaks", checks.memory_leaks},
    {"overflow", checks.overflow},
    {"pointer_checks", checks.pointer_checks},
    {"bounds_checks", checks.bounds_checks},
    {"div_by_zero", checks.div_by_zero}};
  j["violated"] = {
    {"property", pc_tag(violated.property)},
    {"line", violated.line},
    {"function", violated.function},
    {"file", violated.file},
    {"rendered", violated.rendered},
    {"detail", violated.detail}};
  j["states"] = nlohmann::json::array();
  for(const auto &st : states)
  {
    nlohmann::json s;
    s["file"] = st.file;
    s["line"] = st.line;
    s["function"] = st.function;
    s["assignments"] = st.assignments;
    j["states"].push_back(std::move(s));
  }
  nlohmann::json nv = nlohmann::json::object();
  for(const auto &[key, bits] : nondet_values)
    nv[key] = bits;
  j["nondet_values"] = std::move(nv);
  return j.dump(2);
}

counterexample counterexample::from_json(const std::string &text)
{
  nlohmann::json j = nlohmann::json::parse(text);
  counterexample cex;
  cex.source_file = j.value("source_file", "");
  cex.function = j.value("function", "");
  cex.depth = j.value("depth", 1);
  if(j.contains("checks"))
  {
    const auto &c = j["checks"];
    cex.checks.memory_leaks = c.value("memory_leaks", false);
    cex.checks.overflow = c.value("overflow", false);
    cex.checks.pointer_checks = c.value("pointer_checks", true);
    cex.checks.bounds_checks = c.value("bounds_checks", true);
    cex.checks.div_by_zero = c.value("div_by_zero", true);
  }
  if(j.contains("violated"))
  {
    const auto &v = j["violated"];
    cex.violated.property = pc_from_tag(v.value("property", "USER_ASSERT"));
    cex.violated.line = v.value("line", 0);
    cex.violated.function = v.value("function", "");
    cex.violated.file = v.value("file", "");
    cex.violated.rendered = v.value("rendered", "");
    cex.violated.detail = v.value("detail", "");
  }
  for(const auto &s : j.value("states", nlohmann::json::array()))
  {
    cex_state st;
    st.file = s.value("file", "");
    st.line = s.value("line", 0);
    st.function = s.value("function", "");
    for(auto it = s["assignments"].begin(); it != s["assignments"].end(); ++it)
      st.assignments[it.key()] = it.value().get<std::string>();
    cex.states.push_back(std::move(st));
  }
  if(j.contains("nondet_values"))
    for(auto it = j["nondet_values"].begin(); it != j["nondet_values"].end(); ++it)
      cex.nondet_values[it.key()] = it.value().get<std::uint64_t>();
  return cex;
}

std::string counterexample::to_text() const
{
  std::ostringstream os;
  os << "Counterexample:\n\n";
  int n = 0;
  for(const auto &st : states)
  {
    os << "State " << ++n << " file " << st.file << " line " << st.line
       << " function " << st.function << " thread 0\n";
    for(const auto &[var, val] : st.assignments)
      os << "  " << var << " = " << val << "\n";
  }
  os << "-------------------------------------------\n";
  os << "Violated property:\n";
  os << "  file " << violated.file << " line " << violated.line << " function "
     << violated.function << "\n";
  os << "  " << violated.rendered << "\n\n";
  os << "VERIFICATION FAILED\n";
  return os.str();
}

} // namespace kbmc
