#include "chronosite/core/site_model.hpp"

#include <algorithm>

#include "chronosite/errors.hpp"

namespace chronosite::core {

std::string to_string(AttributeKind kind) {
  switch (kind) {
    case AttributeKind::Building:
      return "building";
    case AttributeKind::Facility:
      return "facility";
    case AttributeKind::Instrument:
      return "instrument";
    case AttributeKind::Access:
      return "access";
  }
  return "building";
}

AttributeKind attribute_kind_from_string(const std::string& text) {
  if (text == "building") return AttributeKind::Building;
  if (text == "facility") return AttributeKind::Facility;
  if (text == "instrument") return AttributeKind::Instrument;
  if (text == "access") return AttributeKind::Access;
  throw Error("unknown attribute kind '" + text + "'");
}

const ReferenceState* SiteModel::find_state(const StateId& id) const {
  auto it = std::find_if(states.begin(), states.end(), [&](const ReferenceState& s) { return s.id == id; });
  return it == states.end() ? nullptr : &*it;
}

const Attribute* SiteModel::find_attribute(const AttributeId& id) const {
  auto it = std::find_if(attributes.begin(), attributes.end(), [&](const Attribute& a) { return a.id == id; });
  return it == attributes.end() ? nullptr : &*it;
}

const ReferenceState& SiteModel::state(const StateId& id) const {
  const ReferenceState* s = find_state(id);
  if (s == nullptr) throw UnknownState("unknown reference state '" + id + "'");
  return *s;
}

const ReferenceState* SiteModel::latest_state() const { return states.empty() ? nullptr : &states.back(); }

std::vector<ReferenceState> order_states(std::vector<ReferenceState> states) {
  std::stable_sort(states.begin(), states.end(),
                   [](const ReferenceState& a, const ReferenceState& b) { return a.year < b.year; });
  for (std::size_t i = 0; i < states.size(); ++i) states[i].ordinal = i;
  return states;
}

IdSet state_at(const SiteModel& model, Year year) {
  IdSet out;
  for (const Attribute& a : model.attributes) {
    if (a.existence.contains(year)) out.insert(a.id);
  }
  return out;
}

StateDiff diff_states(const SiteModel& model, const StateId& a, const StateId& b) {
  const ReferenceState& from = model.state(a);
  const ReferenceState& to = model.state(b);
  if (from.ordinal >= to.ordinal) {
    throw OrderError("state '" + a + "' does not precede state '" + b + "'");
  }
  const IdSet before = state_at(model, from.year);
  const IdSet after = state_at(model, to.year);

  StateDiff diff;
  std::set_difference(after.begin(), after.end(), before.begin(), before.end(),
                      std::inserter(diff.added, diff.added.end()));
  std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                      std::inserter(diff.removed, diff.removed.end()));
  std::set_intersection(before.begin(), before.end(), after.begin(), after.end(),
                        std::inserter(diff.retained, diff.retained.end()));
  return diff;
}

const ReferenceState* display_state(const SiteModel& model, Year year) {
  if (model.states.empty()) return nullptr;
  auto it = std::upper_bound(model.states.begin(), model.states.end(), year,
                             [](Year y, const ReferenceState& s) { return y < s.year; });
  if (it == model.states.begin()) return &model.states.front();
  return &*std::prev(it);
}

std::string to_string(Rule rule) {
  switch (rule) {
    case Rule::InvalidInterval:
      return "interval-order";
    case Rule::EmptyName:
      return "empty-name";
    case Rule::DuplicateAttributeId:
      return "duplicate-attribute-id";
    case Rule::DuplicateStateId:
      return "duplicate-state-id";
    case Rule::DuplicateYear:
      return "duplicate-year";
    case Rule::StateOrder:
      return "state-order";
    case Rule::OrdinalSequence:
      return "ordinal-sequence";
    case Rule::UnknownCloud:
      return "unknown-cloud";
    case Rule::EmptySegment:
      return "empty-segment";
    case Rule::OutsideSpan:
      return "outside-state-span";
  }
  return "unknown";
}

bool within_state_span(const SiteModel& model, const Attribute& attribute) {
  if (model.states.empty()) return false;
  const TimeInterval span = TimeInterval::closed(model.states.front().year, model.states.back().year);
  return span.valid() && intersect(span, attribute.existence).has_value();
}

namespace {

void check_states(const SiteModel& model, std::vector<Violation>& out) {
  std::set<StateId> ids;
  std::set<Year> years;
  Year max_year = 0;
  for (std::size_t i = 0; i < model.states.size(); ++i) {
    const ReferenceState& s = model.states[i];
    if (!ids.insert(s.id).second) {
      out.push_back({s.id, Rule::DuplicateStateId, "state id appears more than once"});
    }
    if (s.ordinal != i) {
      out.push_back({s.id, Rule::OrdinalSequence,
                     "ordinal " + std::to_string(s.ordinal) + " at position " + std::to_string(i)});
    }
    if (years.count(s.year) != 0) {
      out.push_back({s.id, Rule::DuplicateYear, "another state already has year " + std::to_string(s.year)});
    } else if (i > 0 && s.year < max_year) {
      out.push_back({s.id, Rule::StateOrder, "year " + std::to_string(s.year) + " precedes an earlier ordinal"});
    }
    years.insert(s.year);
    max_year = i == 0 ? s.year : std::max(max_year, s.year);
    if (s.cloud_id && model.clouds.count(*s.cloud_id) == 0) {
      out.push_back({s.id, Rule::UnknownCloud, "merged cloud '" + *s.cloud_id + "' is not registered"});
    }
  }
}

void check_segment(const SiteModel& model, const Attribute& a, std::vector<Violation>& out) {
  const GeometrySegment& seg = *a.geometry;
  auto cloud = model.clouds.find(seg.cloud_id);
  if (cloud == model.clouds.end()) {
    out.push_back({a.id, Rule::UnknownCloud, "geometry references unknown cloud '" + seg.cloud_id + "'"});
    return;
  }
  if (const auto* range = std::get_if<IndexRange>(&seg.region)) {
    if (range->begin >= range->end || range->end > cloud->second) {
      out.push_back({a.id, Rule::EmptySegment, "point range is empty or exceeds the cloud"});
    }
  } else {
    const auto& box = std::get<BoundingBox>(seg.region);
    for (int k = 0; k < 3; ++k) {
      if (!(box.min[k] <= box.max[k])) {
        out.push_back({a.id, Rule::EmptySegment, "bounding box is inverted"});
        break;
      }
    }
  }
}

}  // namespace

std::vector<Violation> validate_timeline(const SiteModel& model) {
  std::vector<Violation> out;
  check_states(model, out);

  std::set<AttributeId> ids;
  for (const Attribute& a : model.attributes) {
    if (!ids.insert(a.id).second) {
      out.push_back({a.id, Rule::DuplicateAttributeId, "attribute id appears more than once"});
    }
    if (a.name.empty()) out.push_back({a.id, Rule::EmptyName, "attribute name is empty"});
    if (!a.existence.valid()) {
      out.push_back({a.id, Rule::InvalidInterval, "existence " + a.existence.to_string() + " ends before it starts"});
    } else if (!model.states.empty() && !within_state_span(model, a)) {
      out.push_back({a.id, Rule::OutsideSpan, "existence " + a.existence.to_string() + " misses the state span"});
    }
    if (a.geometry) check_segment(model, a, out);
  }
  return out;
}

std::map<AttributeId, Rgb> assign_period_colors(const SiteModel& model, const std::vector<Rgb>& palette) {
  if (palette.size() < model.states.size()) {
    throw PaletteTooSmall("palette has " + std::to_string(palette.size()) + " colors for " +
                          std::to_string(model.states.size()) + " states");
  }
  std::map<AttributeId, Rgb> out;
  for (const Attribute& a : model.attributes) {
    if (!a.existence.valid() || !within_state_span(model, a)) continue;
    auto first = std::lower_bound(model.states.begin(), model.states.end(), a.existence.start,
                                  [](const ReferenceState& s, Year y) { return s.year < y; });
    if (first == model.states.end()) continue;
    out[a.id] = palette[first->ordinal];
  }
  return out;
}

std::vector<Rgb> default_palette() {
  // Qualitative palette, distinguishable under common color-vision deficiencies.
  return {
      {230, 159, 0},  {86, 180, 233}, {0, 158, 115},   {240, 228, 66},  {0, 114, 178},
      {213, 94, 0},   {204, 121, 167}, {120, 120, 120}, {160, 82, 45},  {25, 25, 112},
  };
}

}  // namespace chronosite::core
