/*******************************************************************\

Module: Parallel proof coordinator

\*******************************************************************/

#ifndef KBMC_KINDUCTION_COORDINATOR_H
#define KBMC_KINDUCTION_COORDINATOR_H

#include <optional>

#include "kinduction/engine.h"

namespace kbmc
{

enum class worker_id
{
  BCP,
  FCP,
  ISP
};

const char *worker_name(worker_id w);

/// Messages a worker sends over its pipe. FOUND from BCP carries the
/// counterexample; FOUND from FCP/ISP never does. PROGRESS is BCP-only:
/// the base case is clean up to k, which is what makes an FCP/ISP
/// result conclusive (safety needs pi(k) = B(k) or [F(k) and S(k)] to
/// be refuted as a whole, never F or S alone).
struct worker_message
{
  enum class payload_kind
  {
    FOUND,
    PROGRESS,
    EXHAUSTED,
    ERROR
  };
  worker_id worker = worker_id::BCP;
  payload_kind kind = payload_kind::EXHAUSTED;
  int k = 0;
  std::optional<counterexample> cex;
  std::string text;

  std::string to_json() const;
  static std::optional<worker_message> from_json(const std::string &line);
};

/// Decision logic only; the process plumbing lives in parallel.cpp.
/// Feed messages in arrival order (drain BCP before FCP before ISP in
/// one poll round to get the paper's precedence on simultaneous
/// arrival); decided() flips on the first conclusive result. Late,
/// contradictory messages are recorded and ignored.
class coordinator
{
public:
  void feed(const worker_message &m);
  void worker_gone(worker_id w); // crash or EOF without terminal message

  bool decided() const { return decided_; }
  const verdict &result() const { return verdict_; }
  bool all_workers_done() const;
  const std::vector<std::string> &log() const { return log_; }

private:
  void conclude(verdict v);
  void recheck_pending();

  bool decided_ = false;
  verdict verdict_;
  int bcp_progress_ = 0;
  bool done_[3] = {false, false, false};
  std::optional<worker_message> pending_fcp_;
  std::optional<worker_message> pending_isp_;
  std::vector<std::string> log_;
};

} // namespace kbmc

#endif
