#include "vcgen/smt_solver.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cstring>
#include <sstream>

#include "util/arith.h"
#include "util/errors.h"

namespace kbmc
{

namespace
{

std::string sort_of(const typet &t)
{
  if(t->is_bool())
    return "Bool";
  if(t->is_pointer())
    return "(_ BitVec 64)";
  if(t->is_array())
    return "(Array (_ BitVec 32) " + sort_of(t->sub) + ")";
  return "(_ BitVec " + std::to_string(t->width) + ")";
}

std::string quote(const std::string &name)
{
  return "|" + name + "|";
}

std::string bv_const(std::uint64_t bits, int width)
{
  return "(_ bv" + std::to_string(trunc_bits(bits, width)) + " " +
         std::to_string(width) + ")";
}

class encoder
{
public:
  std::string encode(const exprt &e)
  {
    switch(e->kind)
    {
    case expr_kind::CONSTANT:
      if(e->type->is_bool())
        return e->bits ? "true" : "false";
      if(e->type->is_pointer())
        return bv_const(e->bits, 64);
      return bv_const(e->bits, e->type->width);

    case expr_kind::SYMBOL:
      return quote(e->symbol);

    case expr_kind::UNARY:
    {
      std::string a = encode(e->args[0]);
      switch(e->uop)
      {
      case unary_op::NEG:
        return "(bvneg " + a + ")";
      case unary_op::LOG_NOT:
        return "(not " + to_bool(e->args[0], a) + ")";
      case unary_op::BIT_NOT:
        return "(bvnot " + a + ")";
      }
      break;
    }

    case expr_kind::BINARY:
      return encode_binary(e);

    case expr_kind::ITE:
      return "(ite " + to_bool(e->args[0], encode(e->args[0])) + " " +
             encode(e->args[1]) + " " + encode(e->args[2]) + ")";

    case expr_kind::CAST:
      return encode_cast(e);

    case expr_kind::INDEX:
      return "(select " + encode(e->args[0]) + " " + encode(e->args[1]) + ")";

    case expr_kind::STORE:
      return "(store " + encode(e->args[0]) + " " + encode(e->args[1]) + " " +
             encode(e->args[2]) + ")";

    case expr_kind::PTR_OBJ:
      return "((_ extract 63 32) " + encode(e->args[0]) + ")";

    case expr_kind::PTR_OFF:
      return "((_ extract 31 0) " + encode(e->args[0]) + ")";

    case expr_kind::NO_OVERFLOW:
      return encode_no_overflow(e);

    default:
      break;
    }
    throw encoding_error("operator not supported by the SMT encoding");
  }

  // wrap a bitvector-typed operand as a Bool when needed
  std::string to_bool(const exprt &e, const std::string &enc)
  {
    if(e->type->is_bool())
      return enc;
    return "(distinct " + enc + " " + bv_const(0, e->type->width) + ")";
  }

private:
  std::string encode_binary(const exprt &e)
  {
    const exprt &l = e->args[0];
    const exprt &r = e->args[1];
    std::string a = encode(l);
    std::string b = encode(r);
    const bool sgn = l->type->is_signed();

    // pointer arithmetic adjusts the offset half only
    if(l->type->is_pointer() && (e->bop == binary_op::ADD || e->bop == binary_op::SUB))
    {
      std::string obj = "((_ extract 63 32) " + a + ")";
      std::string off = "((_ extract 31 0) " + a + ")";
      std::string delta = b; // i32 by construction
      std::string noff = e->bop == binary_op::ADD ? "(bvadd " + off + " " + delta + ")"
                                                  : "(bvsub " + off + " " + delta + ")";
      return "(concat " + obj + " " + noff + ")";
    }

    switch(e->bop)
    {
    case binary_op::ADD: return "(bvadd " + a + " " + b + ")";
    case binary_op::SUB: return "(bvsub " + a + " " + b + ")";
    case binary_op::MUL: return "(bvmul " + a + " " + b + ")";
    case binary_op::DIV: return sgn ? "(bvsdiv " + a + " " + b + ")" : "(bvudiv " + a + " " + b + ")";
    case binary_op::REM: return sgn ? "(bvsrem " + a + " " + b + ")" : "(bvurem " + a + " " + b + ")";
    case binary_op::SHL: return "(bvshl " + a + " " + b + ")";
    case binary_op::SHR: return sgn ? "(bvashr " + a + " " + b + ")" : "(bvlshr " + a + " " + b + ")";
    case binary_op::BIT_AND: return "(bvand " + a + " " + b + ")";
    case binary_op::BIT_OR: return "(bvor " + a + " " + b + ")";
    case binary_op::BIT_XOR: return "(bvxor " + a + " " + b + ")";
    case binary_op::LOG_AND: return "(and " + to_bool(l, a) + " " + to_bool(r, b) + ")";
    case binary_op::LOG_OR: return "(or " + to_bool(l, a) + " " + to_bool(r, b) + ")";
    case binary_op::EQ: return "(= " + a + " " + b + ")";
    case binary_op::NE: return "(distinct " + a + " " + b + ")";
    case binary_op::LT: return (sgn ? "(bvslt " : "(bvult ") + a + " " + b + ")";
    case binary_op::LE: return (sgn ? "(bvsle " : "(bvule ") + a + " " + b + ")";
    case binary_op::GT: return (sgn ? "(bvsgt " : "(bvugt ") + a + " " + b + ")";
    case binary_op::GE: return (sgn ? "(bvsge " : "(bvuge ") + a + " " + b + ")";
    }
    throw encoding_error("bad binary operator");
  }

  std::string encode_cast(const exprt &e)
  {
    const exprt &src = e->args[0];
    std::string a = encode(src);
    const typet &from = src->type;
    const typet &to = e->type;

    if(to->is_bool())
      return to_bool(src, a);
    int from_w = from->is_bool() ? 1 : (from->is_pointer() ? 64 : from->width);
    int to_w = to->is_pointer() ? 64 : to->width;
    if(from->is_bool())
      a = "(ite " + a + " " + bv_const(1, 1) + " " + bv_const(0, 1) + ")";
    if(from_w == to_w)
      return a;
    if(from_w > to_w)
      return "((_ extract " + std::to_string(to_w - 1) + " 0) " + a + ")";
    int ext = to_w - from_w;
    if(from->is_signed())
      return "((_ sign_extend " + std::to_string(ext) + ") " + a + ")";
    return "((_ zero_extend " + std::to_string(ext) + ") " + a + ")";
  }

  std::string encode_no_overflow(const exprt &e)
  {
    const exprt &l = e->args[0];
    const exprt &r = e->args[1];
    std::string a = encode(l);
    std::string b = encode(r);
    int w = l->type->width;
    std::string zero = bv_const(0, w);

    switch(e->bop)
    {
    case binary_op::ADD:
    {
      std::string sum = "(bvadd " + a + " " + b + ")";
      std::string pos_ovf = "(and (bvsge " + a + " " + zero + ") (bvsge " + b +
                            " " + zero + ") (bvslt " + sum + " " + zero + "))";
      std::string neg_ovf = "(and (bvslt " + a + " " + zero + ") (bvslt " + b +
                            " " + zero + ") (bvsge " + sum + " " + zero + "))";
      return "(not (or " + pos_ovf + " " + neg_ovf + "))";
    }
    case binary_op::SUB:
    {
      std::string dif = "(bvsub " + a + " " + b + ")";
      std::string ovf1 = "(and (bvsge " + a + " " + zero + ") (bvslt " + b +
                         " " + zero + ") (bvslt " + dif + " " + zero + "))";
      std::string ovf2 = "(and (bvslt " + a + " " + zero + ") (bvsge " + b +
                         " " + zero + ") (bvsge " + dif + " " + zero + "))";
      return "(not (or " + ovf1 + " " + ovf2 + "))";
    }
    case binary_op::MUL:
    {
      // compare against the result re-extended from double width
      std::string wide = "(bvmul ((_ sign_extend " + std::to_string(w) + ") " +
                         a + ") ((_ sign_extend " + std::to_string(w) + ") " +
                         b + "))";
      std::string narrow = "((_ extract " + std::to_string(w - 1) + " 0) " + wide + ")";
      std::string back = "((_ sign_extend " + std::to_string(w) + ") " + narrow + ")";
      return "(= " + wide + " " + back + ")";
    }
    case binary_op::SHL:
    {
      std::string wbits = bv_const(static_cast<std::uint64_t>(w), w);
      std::string in_range = "(bvult " + b + " " + wbits + ")";
      std::string nonneg = "(bvsge " + a + " " + zero + ")";
      std::string shifted = "(bvshl " + a + " " + b + ")";
      std::string round = "(bvashr " + shifted + " " + b + ")";
      std::string lossless = "(and (= " + round + " " + a + ") (bvsge " +
                             shifted + " " + zero + "))";
      return "(and " + in_range + " " + nonneg + " " + lossless + ")";
    }
    default:
      throw encoding_error("bad overflow operator");
    }
  }
};

} // namespace

std::string encode_smtlib(const formula &f)
{
  encoder enc;
  std::ostringstream os;
  os << "(set-option :print-success false)\n";
  os << "(set-option :produce-models true)\n";
  os << "(set-logic QF_AUFBV)\n";

  std::set<std::string> defined;
  for(const auto &it : f.items)
    if(it.kind == formula::item_kind::DEFINE)
      defined.insert(it.lhs);

  for(const auto &[name, type] : f.decls)
    os << "(declare-const " << quote(name) << " " << sort_of(type) << ")\n";

  int pre = 0;
  os << "(define-fun pre0 () Bool true)\n";
  std::vector<std::pair<int, std::string>> violations; // (prefix id, enc)

  for(const auto &it : f.items)
  {
    switch(it.kind)
    {
    case formula::item_kind::DEFINE:
      os << "(assert (= " << quote(it.lhs) << " " << enc.encode(it.expr) << "))\n";
      break;
    case formula::item_kind::CONSTRAIN:
    {
      int next = pre + 1;
      os << "(define-fun pre" << next << " () Bool (and pre" << pre << " "
         << enc.to_bool(it.expr, enc.encode(it.expr)) << "))\n";
      pre = next;
      break;
    }
    case formula::item_kind::VIOLATION:
      violations.push_back({pre, enc.to_bool(it.expr, enc.encode(it.expr))});
      break;
    }
  }

  // every path must satisfy the full assumption chain... except that a
  // claim only sees the assumptions made before it
  os << "(assert (or false";
  for(const auto &[p, v] : violations)
    os << " (and pre" << p << " " << v << ")";
  os << "))\n";
  os << "(check-sat)\n";
  return os.str();
}

// ------------------------------------------------------------- process

namespace
{

struct child_process
{
  pid_t pid = -1;
  int to_child = -1;
  int from_child = -1;

  ~child_process()
  {
    if(to_child >= 0)
      close(to_child);
    if(from_child >= 0)
      close(from_child);
    if(pid > 0)
    {
      kill(pid, SIGKILL);
      waitpid(pid, nullptr, 0);
    }
  }
};

std::vector<std::string> solver_args(const std::string &path)
{
  std::string base = path;
  auto slash = base.rfind('/');
  if(slash != std::string::npos)
    base = base.substr(slash + 1);
  if(base.find("z3") != std::string::npos)
    return {path, "-in", "-smt2"};
  if(base.find("cvc") != std::string::npos)
    return {path, "--lang=smt2"};
  return {path};
}

void spawn_solver(const std::string &path, child_process &cp)
{
  int in_pipe[2], out_pipe[2];
  if(pipe(in_pipe) != 0 || pipe(out_pipe) != 0)
    throw backend_unavailable("pipe() failed");

  pid_t pid = fork();
  if(pid < 0)
    throw backend_unavailable("fork() failed");
  if(pid == 0)
  {
    dup2(in_pipe[0], 0);
    dup2(out_pipe[1], 1);
    close(in_pipe[0]);
    close(in_pipe[1]);
    close(out_pipe[0]);
    close(out_pipe[1]);
    auto args = solver_args(path);
    std::vector<char *> argv;
    for(auto &a : args)
      argv.push_back(a.data());
    argv.push_back(nullptr);
    execvp(path.c_str(), argv.data());
    _exit(127);
  }
  close(in_pipe[0]);
  close(out_pipe[1]);
  cp.pid = pid;
  cp.to_child = in_pipe[1];
  cp.from_child = out_pipe[0];
}

bool write_all(int fd, const std::string &data)
{
  std::size_t off = 0;
  while(off < data.size())
  {
    ssize_t n = write(fd, data.data() + off, data.size() - off);
    if(n <= 0)
      return false;
    off += static_cast<std::size_t>(n);
  }
  return true;
}

// read one line, honoring the deadline; empty + eof=false on timeout
bool read_line(child_process &cp, const deadline &dl, std::string &line, bool &eof, bool &timed_out)
{
  static thread_local std::map<int, std::string> buffers;
  std::string &buf = buffers[cp.from_child];
  eof = false;
  timed_out = false;
  for(;;)
  {
    auto nl = buf.find('\n');
    if(nl != std::string::npos)
    {
      line = buf.substr(0, nl);
      buf.erase(0, nl + 1);
      return true;
    }
    struct pollfd pfd = {cp.from_child, POLLIN, 0};
    int ms = dl.armed() ? 100 : 1000;
    int pr = poll(&pfd, 1, ms);
    if(pr == 0)
    {
      if(dl.expired())
      {
        timed_out = true;
        return false;
      }
      continue;
    }
    if(pr < 0)
      return false;
    char chunk[4096];
    ssize_t n = read(cp.from_child, chunk, sizeof chunk);
    if(n <= 0)
    {
      eof = true;
      if(!buf.empty())
      {
        line = buf;
        buf.clear();
        return true;
      }
      return false;
    }
    buf.append(chunk, static_cast<std::size_t>(n));
  }
}

// parse the value out of a get-value response like ((|x| #x0005))
bool parse_value_response(const std::string &resp, std::uint64_t &value)
{
  // find the last atom before the closing parens
  std::string s = resp;
  while(!s.empty() && (s.back() == ')' || s.back() == '\r' || s.back() == ' '))
    s.pop_back();
  auto pos = s.find_last_of(" (");
  std::string tok = pos == std::string::npos ? s : s.substr(pos + 1);
  if(tok.rfind("#x", 0) == 0)
  {
    value = std::stoull(tok.substr(2), nullptr, 16);
    return true;
  }
  if(tok.rfind("#b", 0) == 0)
  {
    value = std::stoull(tok.substr(2), nullptr, 2);
    return true;
  }
  if(tok == "true")
  {
    value = 1;
    return true;
  }
  if(tok == "false")
  {
    value = 0;
    return true;
  }
  if(tok.rfind("bv", 0) == 0)
  {
    // "(_ bvN W)" — the split above leaves "bvN" then " W)" was trimmed;
    // handle "(_ bvN W)" by scanning for "bv"
    value = std::stoull(tok.substr(2));
    return true;
  }
  auto bv = resp.find(" bv");
  if(bv != std::string::npos)
  {
    value = std::stoull(resp.substr(bv + 3));
    return true;
  }
  return false;
}

} // namespace

solver_verdict solve_with_smt(const formula &f, const smt_options &opts)
{
  if(opts.solver_path.empty())
    throw backend_unavailable("no solver path configured");
  if(opts.solver_path.find('/') != std::string::npos &&
     access(opts.solver_path.c_str(), X_OK) != 0)
    throw backend_unavailable(opts.solver_path + " is not executable");

  signal(SIGPIPE, SIG_IGN);

  std::string script = encode_smtlib(f);

  child_process cp;
  spawn_solver(opts.solver_path, cp);

  deadline dl = opts.timeout_seconds > 0
    ? deadline::after_seconds(opts.timeout_seconds)
    : deadline();

  if(!write_all(cp.to_child, script))
    throw backend_unavailable("solver process rejected input");

  std::string line;
  bool eof = false, timed_out = false;
  std::string answer;
  while(read_line(cp, dl, line, eof, timed_out))
  {
    // skip solver chatter until the check-sat answer
    if(line == "sat" || line == "unsat" || line == "unknown")
    {
      answer = line;
      break;
    }
    if(line.find("error") != std::string::npos)
    {
      solver_verdict v;
      v.status = solver_status::UNKNOWN;
      v.reason = "solver error: " + line;
      return v;
    }
  }
  if(timed_out)
  {
    solver_verdict v;
    v.status = solver_status::UNKNOWN;
    v.reason = "timeout";
    return v;
  }
  if(answer.empty())
  {
    if(eof)
      throw backend_unavailable("solver produced no answer (not installed?)");
    solver_verdict v;
    v.status = solver_status::UNKNOWN;
    v.reason = "no answer";
    return v;
  }

  solver_verdict v;
  if(answer == "unsat")
  {
    v.status = solver_status::UNSAT;
    return v;
  }
  if(answer == "unknown")
  {
    v.status = solver_status::UNKNOWN;
    v.reason = "solver reported unknown";
    return v;
  }

  v.status = solver_status::SAT;

  // pull the model values
  for(const auto &[name, type] : f.decls)
  {
    if(type->is_array())
    {
      std::int64_t len = type->array_length;
      // element counts for heap arrays live in the object table
      for(const auto &o : f.objects)
      {
        if(name.rfind("@mem_" + std::to_string(o.key) + "_", 0) == 0 &&
           o.count_const >= 0)
          len = o.count_const;
      }
      if(len < 0 || len > 4096)
        continue;
      model_value mv;
      mv.is_array = true;
      for(std::int64_t i = 0; i < len; i++)
      {
        std::string q = "(get-value ((select " + quote(name) + " (_ bv" +
                        std::to_string(trunc_bits(static_cast<std::uint64_t>(i), 32)) +
                        " 32))))\n";
        if(!write_all(cp.to_child, q))
          break;
        if(!read_line(cp, dl, line, eof, timed_out))
          break;
        std::uint64_t val = 0;
        parse_value_response(line, val);
        mv.cells.push_back(val);
      }
      v.model[name] = std::move(mv);
      continue;
    }
    std::string q = "(get-value (" + quote(name) + "))\n";
    if(!write_all(cp.to_child, q))
      break;
    if(!read_line(cp, dl, line, eof, timed_out))
      break;
    model_value mv;
    if(!parse_value_response(line, mv.scalar))
      continue;
    v.model[name] = std::move(mv);
  }

  write_all(cp.to_child, "(exit)\n");
  return v;
}

} // namespace kbmc
