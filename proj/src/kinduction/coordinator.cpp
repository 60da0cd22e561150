#include "kinduction/coordinator.h"

#include <json.hpp>

namespace kbmc
{

const char *worker_name(worker_id w)
{
  switch(w)
  {
  case worker_id::BCP: return "BCP";
  case worker_id::FCP: return "FCP";
  case worker_id::ISP: return "ISP";
  }
  return "?";
}

std::string worker_message::to_json() const
{
  nlohmann::json j;
  j["worker"] = worker_name(worker);
  switch(kind)
  {
  case payload_kind::FOUND: j["type"] = "found"; break;
  case payload_kind::PROGRESS: j["type"] = "progress"; break;
  case payload_kind::EXHAUSTED: j["type"] = "exhausted"; break;
  case payload_kind::ERROR: j["type"] = "error"; break;
  }
  j["k"] = k;
  if(!text.empty())
    j["text"] = text;
  if(cex)
    j["cex"] = nlohmann::json::parse(cex->to_json());
  return j.dump();
}

std::optional<worker_message> worker_message::from_json(const std::string &line)
{
  try
  {
    nlohmann::json j = nlohmann::json::parse(line);
    worker_message m;
    std::string w = j.value("worker", "");
    if(w == "BCP")
      m.worker = worker_id::BCP;
    else if(w == "FCP")
      m.worker = worker_id::FCP;
    else if(w == "ISP")
      m.worker = worker_id::ISP;
    else
      return std::nullopt;
    std::string t = j.value("type", "");
    if(t == "found")
      m.kind = payload_kind::FOUND;
    else if(t == "progress")
      m.kind = payload_kind::PROGRESS;
    else if(t == "exhausted")
      m.kind = payload_kind::EXHAUSTED;
    else if(t == "error")
      m.kind = payload_kind::ERROR;
    else
      return std::nullopt;
    m.k = j.value("k", 0);
    m.text = j.value("text", "");
    if(j.contains("cex"))
      m.cex = counterexample::from_json(j["cex"].dump());
    return m;
  }
  catch(...)
  {
    return std::nullopt;
  }
}

bool coordinator::all_workers_done() const
{
  return done_[0] && done_[1] && done_[2];
}

void coordinator::conclude(verdict v)
{
  decided_ = true;
  verdict_ = std::move(v);
}

void coordinator::feed(const worker_message &m)
{
  log_.push_back(std::string(worker_name(m.worker)) + " " + m.to_json());
  if(decided_)
    return; // first conclusive result already returned; late info is logged

  switch(m.kind)
  {
  case worker_message::payload_kind::FOUND:
    if(m.worker == worker_id::BCP)
    {
      verdict v;
      v.status = verdict_status::FALSE_VERDICT;
      v.winning_step = winning_step_kind::BASE_CASE;
      v.k_final = m.k;
      v.cex = m.cex;
      conclude(std::move(v));
      return;
    }
    // FCP/ISP results become conclusive once the base case has covered
    // their bound
    if(m.worker == worker_id::FCP)
      pending_fcp_ = m;
    else
      pending_isp_ = m;
    recheck_pending();
    return;

  case worker_message::payload_kind::PROGRESS:
    if(m.worker == worker_id::BCP)
    {
      bcp_progress_ = std::max(bcp_progress_, m.k);
      recheck_pending();
    }
    return;

  case worker_message::payload_kind::EXHAUSTED:
  case worker_message::payload_kind::ERROR:
    done_[static_cast<int>(m.worker)] = true;
    if(all_workers_done() && !decided_)
    {
      verdict v;
      v.status = verdict_status::UNKNOWN_VERDICT;
      v.unknown_reason = m.kind == worker_message::payload_kind::ERROR
        ? ("worker error: " + m.text)
        : "all workers exhausted";
      v.k_final = bcp_progress_;
      conclude(std::move(v));
    }
    return;
  }
}

void coordinator::worker_gone(worker_id w)
{
  worker_message m;
  m.worker = w;
  m.kind = worker_message::payload_kind::ERROR;
  m.text = "worker terminated unexpectedly";
  feed(m);
}

void coordinator::recheck_pending()
{
  if(decided_)
    return;
  // precedence: FCP before ISP when both are eligible
  if(pending_fcp_ && bcp_progress_ >= pending_fcp_->k)
  {
    verdict v;
    v.status = verdict_status::TRUE_VERDICT;
    v.winning_step = winning_step_kind::FORWARD_CONDITION;
    v.k_final = pending_fcp_->k;
    conclude(std::move(v));
    return;
  }
  if(pending_isp_ && bcp_progress_ >= pending_isp_->k)
  {
    verdict v;
    v.status = verdict_status::TRUE_VERDICT;
    v.winning_step = winning_step_kind::INDUCTIVE_STEP;
    v.k_final = pending_isp_->k;
    conclude(std::move(v));
    return;
  }
  // a worker holding a pending result is done iterating
  if(pending_fcp_)
    done_[static_cast<int>(worker_id::FCP)] = true;
  if(pending_isp_)
    done_[static_cast<int>(worker_id::ISP)] = true;
  if(all_workers_done() && !decided_)
  {
    // the base case stalled below the pending bound
    verdict v;
    v.status = verdict_status::UNKNOWN_VERDICT;
    v.unknown_reason = "base case did not reach the proven bound";
    v.k_final = bcp_progress_;
    conclude(std::move(v));
  }
}

} // namespace kbmc
