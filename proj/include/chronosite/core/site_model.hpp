#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "chronosite/color.hpp"
#include "chronosite/core/time_interval.hpp"

namespace chronosite::core {

using AttributeId = std::string;
using StateId = std::string;
using CloudId = std::string;
using IdSet = std::set<std::string>;

// One dated epoch of the site.
struct ReferenceState {
  StateId id;
  std::string label;
  Year year = 0;
  std::size_t ordinal = 0;
  std::optional<CloudId> cloud_id;  // merged cloud, set once built

  friend bool operator==(const ReferenceState&, const ReferenceState&) = default;
};

enum class AttributeKind { Building, Facility, Instrument, Access };

std::string to_string(AttributeKind kind);
AttributeKind attribute_kind_from_string(const std::string& text);

// Half-open point index range [begin, end) into a cloud.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct BoundingBox {
  std::array<double, 3> min{};
  std::array<double, 3> max{};
  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

struct GeometrySegment {
  CloudId cloud_id;
  std::variant<IndexRange, BoundingBox> region;
  friend bool operator==(const GeometrySegment&, const GeometrySegment&) = default;
};

// A tangible component of the site carrying heritage value.
struct Attribute {
  AttributeId id;
  std::string name;
  AttributeKind kind = AttributeKind::Building;
  TimeInterval existence;
  std::optional<GeometrySegment> geometry;
  std::map<std::string, std::string> metadata;  // purpose, designer, builder, ...

  friend bool operator==(const Attribute&, const Attribute&) = default;
};

// Immutable snapshot of the site timeline. `clouds` maps every known cloud
// (raw ingested clouds and merged state clouds) to its point count.
struct SiteModel {
  std::vector<ReferenceState> states;  // ordered by ordinal
  std::vector<Attribute> attributes;
  std::map<std::string, std::string> site_metadata;
  std::map<CloudId, std::size_t> clouds;

  const ReferenceState* find_state(const StateId& id) const;
  const Attribute* find_attribute(const AttributeId& id) const;
  const ReferenceState& state(const StateId& id) const;  // throws UnknownState
  const ReferenceState* latest_state() const;

  friend bool operator==(const SiteModel&, const SiteModel&) = default;
};

// Sorts states by year and renumbers ordinals 0..n-1.
std::vector<ReferenceState> order_states(std::vector<ReferenceState> states);

// Attributes whose existence interval contains `year`.
IdSet state_at(const SiteModel& model, Year year);

struct StateDiff {
  IdSet added;
  IdSet removed;
  IdSet retained;
  friend bool operator==(const StateDiff&, const StateDiff&) = default;
};

// Throws UnknownState for absent ids, OrderError unless a precedes b.
StateDiff diff_states(const SiteModel& model, const StateId& a, const StateId& b);

// Latest state whose year is <= `year`, or the first state when `year`
// precedes them all. The display snaps to it; the data answer stays exact.
const ReferenceState* display_state(const SiteModel& model, Year year);

enum class Rule {
  InvalidInterval,
  EmptyName,
  DuplicateAttributeId,
  DuplicateStateId,
  DuplicateYear,
  StateOrder,
  OrdinalSequence,
  UnknownCloud,
  EmptySegment,
  OutsideSpan,
};

std::string to_string(Rule rule);

struct Violation {
  std::string subject;  // offending id
  Rule rule;
  std::string detail;
  friend bool operator==(const Violation&, const Violation&) = default;
};

// Empty iff every model invariant holds.
std::vector<Violation> validate_timeline(const SiteModel& model);

// True when the attribute's existence intersects [first state year, last state year].
bool within_state_span(const SiteModel& model, const Attribute& attribute);

// Colors each attribute by the period of its first appearance: palette[k]
// where k is the ordinal of the earliest state with year >= existence.start.
// Attributes whose existence misses the state span are omitted.
std::map<AttributeId, Rgb> assign_period_colors(const SiteModel& model, const std::vector<Rgb>& palette);

std::vector<Rgb> default_palette();

}  // namespace chronosite::core
