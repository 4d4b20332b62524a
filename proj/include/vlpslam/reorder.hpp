#pragma once

#include <vector>

#include "vlpslam/sensors.hpp"

namespace vlpslam {

// Small ingest buffer that absorbs out-of-order sensor arrival. Events are
// held until the newest timestamp seen is at least `delay` ahead of them,
// then released in (t, source rank, seq) order. Any arrival order within the
// delay window therefore produces the same processing order, which is what
// makes live runs match log replays.
class ReorderBuffer {
 public:
  explicit ReorderBuffer(double delay = 0.150) : delay_(delay) {}

  void push(const SensorEvent& e);

  // Events whose time is <= max_seen - delay, in processing order.
  std::vector<SensorEvent> release();
  // Drains everything (end of stream).
  std::vector<SensorEvent> flush();

  double watermark() const { return max_seen_ - delay_; }
  std::size_t pending() const { return pending_.size(); }

 private:
  double delay_;
  double max_seen_ = 0.0;
  bool any_ = false;
  std::vector<SensorEvent> pending_;  // kept sorted by event_before
};

}  // namespace vlpslam
