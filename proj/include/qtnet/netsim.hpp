#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtnet/teleport.hpp"

namespace qtnet::netsim {

struct VerifyResult {
  bool ok = true;
  std::string violation;  // first causality or role breach found
};

// Checks a session transcript for classical-causality and role discipline:
//  - a correction must follow delivery of the correction message it cites,
//    and must be applied by that message's addressee;
//  - when receiver reports are part of the protocol, every report must be
//    delivered before the sender's Bell measurement result is sent;
//  - Bell measurements belong to the sender role only.
inline VerifyResult verify_transcript(const Transcript& tr) {
  auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };

  for (std::size_t t = 0; t < tr.events.size(); ++t) {
    const Event& e = tr.events[t];
    if (e.type == EventType::measurement && e.op == "bsm" && e.role != "alice")
      return fail("bell measurement performed by role " + e.role + " at t=" + std::to_string(t));

    if (e.type == EventType::correction_applied) {
      bool delivered = false;
      for (std::size_t s = 0; s < t; ++s) {
        const Event& d = tr.events[s];
        if (d.type != EventType::message_delivered || d.msg.kind != "bsm_result") continue;
        if (e.correction_msg_id >= 0 ? d.msg.id == e.correction_msg_id : d.msg.to == e.role) {
          delivered = true;
          if (d.msg.to != e.role)
            return fail("correction at t=" + std::to_string(t) + " applied by " + e.role +
                        " but the result message was addressed to " + d.msg.to);
          break;
        }
      }
      if (!delivered)
        return fail("correction at t=" + std::to_string(t) +
                    " precedes delivery of its measurement result");
    }

    if (e.type == EventType::message_sent && e.msg.kind == "bsm_result") {
      // Reports announced anywhere in the session must have arrived first:
      // the sender needs every minus count before fixing the correction.
      for (std::size_t s = 0; s < tr.events.size(); ++s) {
        const Event& r = tr.events[s];
        if (r.type != EventType::message_sent || r.msg.kind != "hadamard_report") continue;
        bool arrived = false;
        for (std::size_t u = 0; u < t; ++u) {
          const Event& d = tr.events[u];
          if (d.type == EventType::message_delivered && d.msg.id == r.msg.id) {
            arrived = true;
            break;
          }
        }
        if (!arrived)
          return fail("measurement result sent at t=" + std::to_string(t) +
                      " before report " + std::to_string(r.msg.id) + " was delivered");
      }
    }
  }
  return {};
}

struct SessionOptions {
  std::optional<std::uint64_t> seed;          // default 1 when neither is given
  std::optional<std::vector<std::size_t>> forced_outcomes;
};

struct SessionResult {
  double fidelity;
  teleport::GenBellIndex p;
  teleport::ParityRecord parity;
  Transcript transcript;
};

// One full protocol session plus transcript verification.  A verifier failure
// here means the engine itself broke causality, so it surfaces as logic_error
// rather than a reportable outcome.
inline SessionResult run_session(teleport::Scheme scheme, const teleport::NetworkConfig& cfg,
                                 const teleport::InfoState& info, const SessionOptions& options) {
  OutcomeSource source = options.forced_outcomes
                             ? OutcomeSource::forced(*options.forced_outcomes)
                             : OutcomeSource::seeded(options.seed.value_or(1));
  teleport::TeleportResult r = teleport::run_teleport(scheme, cfg, info, source);
  VerifyResult v = verify_transcript(r.transcript);
  if (!v.ok) throw std::logic_error("session transcript failed verification: " + v.violation);
  return {r.fidelity, r.p, std::move(r.parity), std::move(r.transcript)};
}

// Test helper: moves the delivery event of one message `shift` positions
// later, leaving everything else in order.
inline Transcript delay_delivery(const Transcript& tr, long long msg_id, std::size_t shift) {
  Transcript out = tr;
  std::size_t pos = out.events.size();
  for (std::size_t t = 0; t < out.events.size(); ++t) {
    if (out.events[t].type == EventType::message_delivered && out.events[t].msg.id == msg_id) {
      pos = t;
      break;
    }
  }
  if (pos == out.events.size()) throw std::invalid_argument("delay_delivery: no such delivery");
  Event moved = out.events[pos];
  out.events.erase(out.events.begin() + static_cast<std::ptrdiff_t>(pos));
  std::size_t dest = std::min(pos + shift, out.events.size());
  out.events.insert(out.events.begin() + static_cast<std::ptrdiff_t>(dest), std::move(moved));
  return out;
}

}  // namespace qtnet::netsim
