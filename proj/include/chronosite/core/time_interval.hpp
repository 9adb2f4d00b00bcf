#pragma once

#include <optional>
#include <string>

namespace chronosite::core {

using Year = int;

// Closed year interval [start, end]. An absent end is OPEN: the interval
// contains every year from `start` on ("still present").
struct TimeInterval {
  Year start = 0;
  std::optional<Year> end;

  static TimeInterval closed(Year from, Year to) { return {from, to}; }
  static TimeInterval open(Year from) { return {from, std::nullopt}; }

  bool is_open() const { return !end.has_value(); }
  bool valid() const { return is_open() || start <= *end; }
  bool contains(Year year) const { return year >= start && (is_open() || year <= *end); }

  // True when `other` lies entirely inside this interval.
  bool covers(const TimeInterval& other) const;

  std::string to_string() const;

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

// Intersection of two valid intervals; nullopt when disjoint.
std::optional<TimeInterval> intersect(const TimeInterval& a, const TimeInterval& b);

}  // namespace chronosite::core
