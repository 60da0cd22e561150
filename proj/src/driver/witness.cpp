#include "driver/witness.h"

#include <fstream>
#include <sstream>

#include "util/errors.h"

namespace kbmc
{

namespace
{

std::string xml_escape(const std::string &s)
{
  std::string out;
  for(char c : s)
  {
    switch(c)
    {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&apos;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

std::string render_witness(const counterexample &cex)
{
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n";
  os << "  <key id=\"entry\" for=\"node\" attr.name=\"isEntryNode\" attr.type=\"boolean\"/>\n";
  os << "  <key id=\"violation\" for=\"node\" attr.name=\"isViolationNode\" attr.type=\"boolean\"/>\n";
  os << "  <key id=\"startline\" for=\"edge\" attr.name=\"startline\" attr.type=\"int\"/>\n";
  os << "  <key id=\"assumption\" for=\"edge\" attr.name=\"assumption\" attr.type=\"string\"/>\n";
  os << "  <key id=\"enclosingfunction\" for=\"edge\" attr.name=\"enclosingFunction\" attr.type=\"string\"/>\n";
  os << "  <key id=\"sourcefile\" for=\"graph\" attr.name=\"sourceFile\" attr.type=\"string\"/>\n";
  os << "  <key id=\"spec\" for=\"graph\" attr.name=\"violatedProperty\" attr.type=\"string\"/>\n";
  os << "  <graph edgedefault=\"directed\">\n";
  os << "    <data key=\"sourcefile\">" << xml_escape(cex.source_file) << "</data>\n";
  os << "    <data key=\"spec\">" << xml_escape(cex.violated.rendered) << "</data>\n";

  // entry node, one node per state, the last node is the violation;
  // with no states the violation node directly follows the entry
  std::size_t nodes = cex.states.size() + 1;
  if(nodes < 2)
    nodes = 2;
  for(std::size_t i = 0; i < nodes; i++)
  {
    os << "    <node id=\"N" << i << "\">";
    if(i == 0)
      os << "<data key=\"entry\">true</data>";
    if(i == nodes - 1)
      os << "<data key=\"violation\">true</data>";
    os << "</node>\n";
  }
  for(std::size_t i = 0; i + 1 < nodes; i++)
  {
    int line = cex.violated.line;
    std::string assumption;
    std::string function = cex.violated.function;
    if(i < cex.states.size())
    {
      const cex_state &st = cex.states[i];
      line = st.line;
      function = st.function;
      for(const auto &[var, val] : st.assignments)
      {
        if(!assumption.empty())
          assumption += "; ";
        assumption += var + " = " + val;
      }
    }
    os << "    <edge source=\"N" << i << "\" target=\"N" << i + 1 << "\">";
    os << "<data key=\"startline\">" << line << "</data>";
    if(!assumption.empty())
      os << "<data key=\"assumption\">" << xml_escape(assumption) << "</data>";
    os << "<data key=\"enclosingfunction\">" << xml_escape(function) << "</data>";
    os << "</edge>\n";
  }
  os << "  </graph>\n";
  os << "</graphml>\n";
  return os.str();
}

void write_witness(const counterexample &cex, const std::string &path)
{
  std::ofstream out(path, std::ios::binary);
  if(!out)
    throw io_error("cannot write witness: " + path);
  out << render_witness(cex);
}

} // namespace kbmc
