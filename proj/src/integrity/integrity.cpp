#include "chronosite/integrity/integrity.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "chronosite/errors.hpp"

namespace chronosite::integrity {

namespace {

Completeness ratio(std::size_t hits, std::size_t total) {
  Completeness c;
  c.documented = hits;
  c.active = total;
  c.vacuous = total == 0;
  c.fraction = total == 0 ? 1.0 : static_cast<double>(hits) / static_cast<double>(total);
  return c;
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

Completeness inventory_completeness(const core::SiteModel& model, const archive::ArchiveStore& store,
                                    const core::StateId& state) {
  const core::ReferenceState& s = model.state(state);
  const core::IdSet active = core::state_at(model, s.year);
  const auto documented = std::count_if(active.begin(), active.end(),
                                        [&](const core::AttributeId& id) { return store.has_evidence(id); });
  return ratio(static_cast<std::size_t>(documented), active.size());
}

Completeness evidence_coverage(const core::SiteModel& model, const archive::ArchiveStore& store,
                               const core::StateId& state) {
  const core::ReferenceState& s = model.state(state);
  const core::IdSet active = core::state_at(model, s.year);
  std::size_t hits = 0;
  for (const core::AttributeId& id : active) {
    for (const archive::DocumentId& doc : store.evidence_for(id)) {
      const archive::DocumentRecord& d = store.document(doc);
      if (d.date && d.date->contains(s.year)) {
        ++hits;
        break;
      }
    }
  }
  return ratio(hits, active.size());
}

Survival survival_fraction(const core::SiteModel& model, const core::StateId& from_state) {
  const core::ReferenceState& from = model.state(from_state);
  const core::ReferenceState& latest = *model.latest_state();
  const core::IdSet then = core::state_at(model, from.year);
  const core::IdSet now = core::state_at(model, latest.year);

  Survival s;
  s.reference_state_id = from.id;
  for (const core::AttributeId& id : then) {
    (now.count(id) != 0 ? s.surviving_ids : s.lost_ids).insert(id);
  }
  s.vacuous = then.empty();
  s.fraction = then.empty() ? 1.0 : static_cast<double>(s.surviving_ids.size()) / static_cast<double>(then.size());
  return s;
}

Continuity continuity_of_use(const core::SiteModel& model) {
  if (model.attributes.empty()) throw EmptyModel("model has no attributes");
  if (model.states.empty()) throw EmptyModel("model has no reference states");
  const core::Year first = model.states.front().year;
  const core::Year last = model.states.back().year;

  // Existence intervals clipped to the span, swept in start order.
  std::vector<YearSpan> covered;
  for (const core::Attribute& a : model.attributes) {
    if (!a.existence.valid()) continue;
    const core::Year lo = std::max(first, a.existence.start);
    const core::Year hi = a.existence.is_open() ? last : std::min(last, *a.existence.end);
    if (lo <= hi) covered.emplace_back(lo, hi);
  }
  std::sort(covered.begin(), covered.end());

  Continuity c;
  core::Year next_uncovered = first;
  for (const auto& [lo, hi] : covered) {
    if (lo > next_uncovered) c.gaps.emplace_back(next_uncovered, lo - 1);
    next_uncovered = std::max(next_uncovered, hi + 1);
  }
  if (next_uncovered <= last) c.gaps.emplace_back(next_uncovered, last);
  c.continuous = c.gaps.empty();
  return c;
}

IntegrityReport integrity_statement(const core::SiteModel& model, const archive::ArchiveStore& store,
                                    const std::map<std::string, std::string>& operator_notes) {
  IntegrityReport report;
  report.site_metadata = model.site_metadata;

  for (const core::ReferenceState& s : model.states) {
    const Completeness inv = inventory_completeness(model, store, s.id);
    const Completeness cov = evidence_coverage(model, store, s.id);
    report.per_state.push_back({s.id, s.year, inv.fraction, cov.fraction, inv.active});
    if (inv.vacuous) report.warnings.push_back("state " + s.id + " has no active attributes; completeness is vacuous");
  }

  if (!model.states.empty()) {
    report.survival = survival_fraction(model, model.states.front().id);
    if (report.survival.vacuous) report.warnings.push_back("earliest state is empty; survival is vacuous");
  } else {
    report.survival.vacuous = true;
    report.warnings.push_back("model has no reference states");
  }

  try {
    report.continuity = continuity_of_use(model);
  } catch (const EmptyModel& e) {
    report.continuity = {};
    report.warnings.push_back(std::string("continuity not assessed: ") + e.what());
  }

  auto note = [&](const char* key) {
    auto it = operator_notes.find(key);
    return it == operator_notes.end() ? std::string() : it->second;
  };

  {
    std::ostringstream os;
    std::size_t documented = 0;
    for (const core::Attribute& a : model.attributes) documented += store.has_evidence(a.id) ? 1 : 0;
    os << model.attributes.size() << " attributes recorded across " << model.states.size()
       << " reference states; " << documented << " backed by at least one archive document.";
    if (!model.states.empty()) {
      const core::Year first = model.states.front().year;
      const core::Year last = model.states.back().year;
      os << " The reference states span " << first << " to " << last << " (" << last - first << " years).";
    }
    const auto meta = [&](const char* key) -> const std::string* {
      auto it = model.site_metadata.find(key);
      return it == model.site_metadata.end() ? nullptr : &it->second;
    };
    if (const std::string* e = meta("elevation_m")) os << " Site elevation: " << *e << " m.";
    if (const std::string* y = meta("first_regular_use")) os << " First regular use: " << *y << ".";
    if (const core::ReferenceState* latest = model.latest_state()) {
      os << " " << core::state_at(model, latest->year).size() << " present in the latest state (" << latest->year
         << ").";
    }
    report.statement.elements = os.str();
  }
  {
    std::ostringstream os;
    os << "Inventory completeness by state:";
    for (const StateRow& row : report.per_state) {
      os << " " << row.state_id << " (" << row.year << ") " << fixed3(row.inventory_completeness) << ";";
    }
    if (!model.states.empty()) {
      os << " fraction of the earliest state surviving today: " << fixed3(report.survival.fraction) << ".";
    }
    report.statement.representation = os.str();
  }
  report.statement.adverse_effects = note(kNoteAdverseEffects);
  report.statement.landscape = note(kNoteLandscape);
  report.statement.condition = note(kNoteCondition);
  return report;
}

std::string render_text(const IntegrityReport& report) {
  std::ostringstream os;
  os << "INTEGRITY REPORT\n\nSite\n";
  for (const auto& [k, v] : report.site_metadata) os << "  " << k << ": " << v << "\n";

  os << "\nReference states\n";
  os << "  state            year  active  inventory  evidence\n";
  for (const StateRow& row : report.per_state) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-15s %5d  %6zu  %9.3f  %8.3f\n", row.state_id.c_str(), row.year,
                  row.active_attributes, row.inventory_completeness, row.evidence_coverage);
    os << buf;
  }

  os << "\nSurvival since " << report.survival.reference_state_id << ": " << fixed3(report.survival.fraction) << " ("
     << report.survival.surviving_ids.size() << " surviving, " << report.survival.lost_ids.size() << " lost)\n";

  os << "Continuity of use: " << (report.continuity.continuous ? "continuous" : "interrupted") << "\n";
  for (const auto& [lo, hi] : report.continuity.gaps) os << "  gap " << lo << "-" << hi << "\n";

  os << "\nStatement of integrity\n";
  os << "  (a) elements: " << report.statement.elements << "\n";
  os << "  (b) representation: " << report.statement.representation << "\n";
  os << "  (c) adverse effects [operator]: " << report.statement.adverse_effects << "\n";
  os << "  (d) landscape [operator]: " << report.statement.landscape << "\n";
  os << "  (e) condition [operator]: " << report.statement.condition << "\n";

  if (!report.warnings.empty()) {
    os << "\nWarnings\n";
    for (const std::string& w : report.warnings) os << "  - " << w << "\n";
  }
  return os.str();
}

}  // namespace chronosite::integrity
