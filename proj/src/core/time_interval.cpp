#include "chronosite/core/time_interval.hpp"

#include <algorithm>

namespace chronosite::core {

bool TimeInterval::covers(const TimeInterval& other) const {
  if (other.start < start) return false;
  if (is_open()) return true;
  if (other.is_open()) return false;
  return *other.end <= *end;
}

std::string TimeInterval::to_string() const {
  return "[" + std::to_string(start) + ", " + (is_open() ? std::string("open") : std::to_string(*end)) +
         "]";
}

std::optional<TimeInterval> intersect(const TimeInterval& a, const TimeInterval& b) {
  TimeInterval out;
  out.start = std::max(a.start, b.start);
  if (a.is_open()) {
    out.end = b.end;
  } else if (b.is_open()) {
    out.end = a.end;
  } else {
    out.end = std::min(*a.end, *b.end);
  }
  if (!out.valid()) return std::nullopt;
  return out;
}

}  // namespace chronosite::core
