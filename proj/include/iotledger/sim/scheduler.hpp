#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

namespace iotledger::sim {

/// Discrete-event queue on an integer-millisecond clock. Events at the same
/// instant run in the order they were scheduled.
class Scheduler {
 public:
  using Action = std::function<void()>;

  void at(std::uint64_t time_ms, Action action, bool delivery = false) {
    queue_.push(Event{time_ms, seq_++, delivery, std::move(action)});
  }
  void after(std::uint64_t delay_ms, Action action, bool delivery = false) {
    at(now_ + delay_ms, std::move(action), delivery);
  }

  std::uint64_t now() const { return now_; }
  bool empty() const { return queue_.empty(); }
  std::uint64_t next_time() const { return queue_.top().time; }
  std::uint64_t executed() const { return executed_; }

  /// Runs the earliest event. When `deliveries_only` is set, other events are
  /// discarded instead of run, and do not advance the clock.
  void step(bool deliveries_only = false) {
    Event ev = queue_.top();
    queue_.pop();
    if (deliveries_only && !ev.delivery) return;
    now_ = ev.time;
    ++executed_;
    ev.action();
  }

 private:
  struct Event {
    std::uint64_t time;
    std::uint64_t seq;
    bool delivery;
    Action action;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t now_ = 0;
  std::uint64_t seq_ = 0;
  std::uint64_t executed_ = 0;
};

}  // namespace iotledger::sim
