#include "vlpslam/reorder.hpp"

#include <algorithm>

namespace vlpslam {

void ReorderBuffer::push(const SensorEvent& e) {
  const double t = event_time(e);
  if (!any_ || t > max_seen_) {
    max_seen_ = t;
    any_ = true;
  }
  pending_.insert(
      std::upper_bound(pending_.begin(), pending_.end(), e, event_before), e);
}

std::vector<SensorEvent> ReorderBuffer::release() {
  if (!any_) return {};
  const double cutoff = max_seen_ - delay_;
  auto it = pending_.begin();
  while (it != pending_.end() && event_time(*it) <= cutoff) ++it;
  std::vector<SensorEvent> out(pending_.begin(), it);
  pending_.erase(pending_.begin(), it);
  return out;
}

std::vector<SensorEvent> ReorderBuffer::flush() {
  std::vector<SensorEvent> out = std::move(pending_);
  pending_.clear();
  return out;
}

}  // namespace vlpslam
