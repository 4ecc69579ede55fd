#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtnet/json_writer.hpp"

namespace qtnet {

enum class EventType { quantum_op, measurement, message_sent, message_delivered, correction_applied };

inline const char* event_type_name(EventType t) {
  switch (t) {
    case EventType::quantum_op: return "quantum_op";
    case EventType::measurement: return "measurement";
    case EventType::message_sent: return "message_sent";
    case EventType::message_delivered: return "message_delivered";
    case EventType::correction_applied: return "correction_applied";
  }
  return "unknown";
}

struct ClassicalMessage {
  std::string from;
  std::string to;
  std::string kind;  // bsm_result | hadamard_report | cnot_instruction | measure_instruction
  std::vector<int> bits;
  long long id = -1;
};

struct Event {
  EventType type = EventType::quantum_op;
  std::string role;
  std::string op;
  std::vector<std::string> targets;
  long long outcome = -1;
  double probability = -1.0;
  ClassicalMessage msg;
  std::string correction;
  long long correction_msg_id = -1;
};

// Time-ordered record of one protocol session.  Event times are positions in
// the list; serialization is line-delimited JSON with a fixed field order.
struct Transcript {
  std::string protocol;
  bool seeded = false;
  std::uint64_t seed = 0;
  std::vector<Event> events;
  long long next_msg_id = 0;

  void op(const std::string& role, const std::string& name,
          const std::vector<std::string>& targets) {
    Event e;
    e.type = EventType::quantum_op;
    e.role = role;
    e.op = name;
    e.targets = targets;
    events.push_back(std::move(e));
  }

  void measurement(const std::string& role, const std::string& name,
                   const std::vector<std::string>& targets, long long outcome,
                   double probability) {
    Event e;
    e.type = EventType::measurement;
    e.role = role;
    e.op = name;
    e.targets = targets;
    e.outcome = outcome;
    e.probability = probability;
    events.push_back(std::move(e));
  }

  long long message_sent(const std::string& from, const std::string& to, const std::string& kind,
                         const std::vector<int>& bits) {
    Event e;
    e.type = EventType::message_sent;
    e.msg = {from, to, kind, bits, next_msg_id++};
    events.push_back(std::move(e));
    return events.back().msg.id;
  }

  void deliver(long long msg_id) {
    for (const Event& e : events) {
      if (e.type == EventType::message_sent && e.msg.id == msg_id) {
        Event d;
        d.type = EventType::message_delivered;
        d.msg = e.msg;
        events.push_back(std::move(d));
        return;
      }
    }
    throw std::invalid_argument("deliver: unknown message id");
  }

  // Reliable zero-latency logical channel: delivery directly follows send.
  long long message(const std::string& from, const std::string& to, const std::string& kind,
                    const std::vector<int>& bits) {
    long long id = message_sent(from, to, kind, bits);
    deliver(id);
    return id;
  }

  void correction(const std::string& role, const std::string& code, long long msg_id) {
    Event e;
    e.type = EventType::correction_applied;
    e.role = role;
    e.correction = code;
    e.correction_msg_id = msg_id;
    events.push_back(std::move(e));
  }

  std::string to_jsonl() const {
    std::string out;
    for (std::size_t t = 0; t < events.size(); ++t) {
      const Event& e = events[t];
      JsonWriter w;
      w.begin_object();
      w.kv("t", t);
      w.kv("type", event_type_name(e.type));
      switch (e.type) {
        case EventType::quantum_op:
          w.kv("role", e.role).kv("op", e.op);
          w.key("targets").begin_array();
          for (const std::string& s : e.targets) w.value(s);
          w.end_array();
          break;
        case EventType::measurement:
          w.kv("role", e.role).kv("op", e.op);
          w.key("targets").begin_array();
          for (const std::string& s : e.targets) w.value(s);
          w.end_array();
          w.kv("outcome", e.outcome).kv("probability", e.probability);
          break;
        case EventType::message_sent:
        case EventType::message_delivered:
          w.kv("from", e.msg.from).kv("to", e.msg.to).kv("kind", e.msg.kind);
          w.int_array("bits", e.msg.bits);
          w.kv("msg_id", e.msg.id);
          break;
        case EventType::correction_applied:
          w.kv("role", e.role).kv("correction", e.correction).kv("msg_id", e.correction_msg_id);
          break;
      }
      w.end_object();
      out += w.str();
      out += '\n';
    }
    return out;
  }
};

}  // namespace qtnet
