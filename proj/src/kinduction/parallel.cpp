/*******************************************************************\

Module: Multi-core k-induction

\*******************************************************************/

// The primary process forks three workers, one per proof step, each
// with a pipe back to the parent. BCP iterates the base case at k and
// reports progress after every clean bound; FCP and ISP verify at k+1.
// The parent returns on the first conclusive result and terminates the
// others (SIGTERM, then SIGKILL after two seconds).

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

#include "kinduction/coordinator.h"
#include "kinduction/engine.h"

namespace kbmc
{

namespace
{

void write_message(int fd, const worker_message &m)
{
  std::string line = m.to_json() + "\n";
  std::size_t off = 0;
  while(off < line.size())
  {
    ssize_t n = write(fd, line.data() + off, line.size() - off);
    if(n <= 0)
      return;
    off += static_cast<std::size_t>(n);
  }
}

[[noreturn]] void run_bcp(const step_context &ctx, int fd)
{
  for(int k = 1; k <= ctx.cfg.max_iterations; k++)
  {
    base_case_result r = base_case(ctx, k);
    worker_message m;
    m.worker = worker_id::BCP;
    m.k = k;
    if(r.outcome == base_case_outcome::CEX_FOUND)
    {
      m.kind = worker_message::payload_kind::FOUND;
      m.cex = std::move(r.cex);
      write_message(fd, m);
      _exit(0);
    }
    if(r.outcome == base_case_outcome::UNKNOWN)
    {
      m.kind = worker_message::payload_kind::ERROR;
      m.text = r.reason;
      write_message(fd, m);
      _exit(0);
    }
    m.kind = worker_message::payload_kind::PROGRESS;
    write_message(fd, m);
  }
  worker_message m;
  m.worker = worker_id::BCP;
  m.kind = worker_message::payload_kind::EXHAUSTED;
  m.k = ctx.cfg.max_iterations;
  write_message(fd, m);
  _exit(0);
}

[[noreturn]] void run_fcp(const step_context &ctx, int fd)
{
  for(int k = 1; k <= ctx.cfg.max_iterations; k++)
  {
    forward_outcome o = forward_condition(ctx, k + 1);
    if(o == forward_outcome::TERMINATED)
    {
      worker_message m;
      m.worker = worker_id::FCP;
      m.kind = worker_message::payload_kind::FOUND;
      m.k = k + 1;
      write_message(fd, m);
      _exit(0);
    }
  }
  worker_message m;
  m.worker = worker_id::FCP;
  m.kind = worker_message::payload_kind::EXHAUSTED;
  m.k = ctx.cfg.max_iterations;
  write_message(fd, m);
  _exit(0);
}

[[noreturn]] void run_isp(const step_context &ctx, int fd)
{
  for(int k = 1; k <= ctx.cfg.max_iterations; k++)
  {
    inductive_outcome o = inductive_step(ctx, k + 1);
    if(o == inductive_outcome::INDUCTIVE)
    {
      worker_message m;
      m.worker = worker_id::ISP;
      m.kind = worker_message::payload_kind::FOUND;
      m.k = k + 1;
      write_message(fd, m);
      _exit(0);
    }
  }
  worker_message m;
  m.worker = worker_id::ISP;
  m.kind = worker_message::payload_kind::EXHAUSTED;
  m.k = ctx.cfg.max_iterations;
  write_message(fd, m);
  _exit(0);
}

struct worker_proc
{
  worker_id id;
  pid_t pid = -1;
  int fd = -1;
  std::string buffer;
  bool open = true;
  bool got_terminal = false;
};

void terminate_workers(std::vector<worker_proc> &workers)
{
  for(auto &w : workers)
    if(w.pid > 0)
      kill(w.pid, SIGTERM);
  auto hard_kill_at = std::chrono::steady_clock::now() + std::chrono::seconds(2);
  for(auto &w : workers)
  {
    if(w.pid <= 0)
      continue;
    for(;;)
    {
      int status = 0;
      pid_t r = waitpid(w.pid, &status, WNOHANG);
      if(r == w.pid)
        break;
      if(std::chrono::steady_clock::now() >= hard_kill_at)
      {
        kill(w.pid, SIGKILL);
        waitpid(w.pid, &status, 0);
        break;
      }
      usleep(10000);
    }
    w.pid = -1;
  }
  for(auto &w : workers)
    if(w.fd >= 0)
    {
      close(w.fd);
      w.fd = -1;
    }
}

} // namespace

verdict kinduction_parallel(const step_context &ctx)
{
  auto start = std::chrono::steady_clock::now();
  signal(SIGPIPE, SIG_IGN);

  std::vector<worker_proc> workers;
  for(worker_id id : {worker_id::BCP, worker_id::FCP, worker_id::ISP})
  {
    int pipefd[2];
    if(pipe(pipefd) != 0)
    {
      verdict v;
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = "pipe() failed";
      return v;
    }
    pid_t pid = fork();
    if(pid < 0)
    {
      verdict v;
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = "fork() failed";
      terminate_workers(workers);
      return v;
    }
    if(pid == 0)
    {
      close(pipefd[0]);
      signal(SIGTERM, SIG_DFL);
      switch(id)
      {
      case worker_id::BCP: run_bcp(ctx, pipefd[1]);
      case worker_id::FCP: run_fcp(ctx, pipefd[1]);
      case worker_id::ISP: run_isp(ctx, pipefd[1]);
      }
      _exit(1);
    }
    close(pipefd[1]);
    worker_proc w;
    w.id = id;
    w.pid = pid;
    w.fd = pipefd[0];
    workers.push_back(w);
  }

  coordinator coord;

  auto drain = [&](worker_proc &w) {
    if(!w.open)
      return;
    for(;;)
    {
      char chunk[8192];
      ssize_t n = read(w.fd, chunk, sizeof chunk);
      if(n > 0)
      {
        w.buffer.append(chunk, static_cast<std::size_t>(n));
        continue;
      }
      if(n == 0)
      {
        w.open = false;
        break;
      }
      break; // EAGAIN
    }
    std::size_t pos;
    while((pos = w.buffer.find('\n')) != std::string::npos)
    {
      std::string line = w.buffer.substr(0, pos);
      w.buffer.erase(0, pos + 1);
      auto m = worker_message::from_json(line);
      if(m)
      {
        if(m->kind == worker_message::payload_kind::FOUND ||
           m->kind == worker_message::payload_kind::EXHAUSTED ||
           m->kind == worker_message::payload_kind::ERROR)
          w.got_terminal = true;
        coord.feed(*m);
      }
    }
    if(!w.open && !w.got_terminal)
    {
      coord.worker_gone(w.id);
      w.got_terminal = true;
    }
  };

  for(auto &w : workers)
    fcntl(w.fd, F_SETFL, O_NONBLOCK);

  while(!coord.decided())
  {
    if(ctx.cfg.overall.expired())
      break;
    struct pollfd pfds[3];
    int live = 0;
    for(std::size_t i = 0; i < workers.size(); i++)
    {
      pfds[i] = {workers[i].fd, POLLIN, 0};
      if(workers[i].open)
        live++;
    }
    if(live == 0)
      break;
    poll(pfds, workers.size(), 200);
    // one poll round: BCP first, then FCP, then ISP — the precedence on
    // simultaneous arrival
    for(auto &w : workers)
      drain(w);
  }

  terminate_workers(workers);

  verdict v;
  if(coord.decided())
    v = coord.result();
  else
  {
    v.status = verdict_status::UNKNOWN_VERDICT;
    v.unknown_reason = ctx.cfg.overall.expired() ? "timeout" : "no conclusive worker result";
  }
  v.wall_time =
    std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return v;
}

} // namespace kbmc
