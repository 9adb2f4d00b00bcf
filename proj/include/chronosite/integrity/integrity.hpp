#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chronosite/archive/archive_store.hpp"
#include "chronosite/core/site_model.hpp"

namespace chronosite::integrity {

struct Completeness {
  double fraction = 1.0;
  std::size_t documented = 0;
  std::size_t active = 0;
  bool vacuous = false;  // no active attributes; fraction reported as 1
};

// Share of the attributes active at the state's year that have at least one
// linked or mentioning document. Throws UnknownState.
Completeness inventory_completeness(const core::SiteModel& model, const archive::ArchiveStore& store,
                                    const core::StateId& state);

// Share of active attributes with at least one dated piece of evidence whose
// date interval contains the state's year. Throws UnknownState.
Completeness evidence_coverage(const core::SiteModel& model, const archive::ArchiveStore& store,
                               const core::StateId& state);

struct Survival {
  core::StateId reference_state_id;
  double fraction = 1.0;
  core::IdSet surviving_ids;
  core::IdSet lost_ids;
  bool vacuous = false;
};

// How much of the given state's attribute set is still present in the
// latest state. Throws UnknownState.
Survival survival_fraction(const core::SiteModel& model, const core::StateId& from_state);

using YearSpan = std::pair<core::Year, core::Year>;  // inclusive

struct Continuity {
  bool continuous = true;
  std::vector<YearSpan> gaps;
};

// Maximal runs of years inside [first state year, last state year] with no
// active attribute. Throws EmptyModel without attributes or states.
Continuity continuity_of_use(const core::SiteModel& model);

struct StateRow {
  core::StateId state_id;
  core::Year year = 0;
  double inventory_completeness = 1.0;
  double evidence_coverage = 1.0;
  std::size_t active_attributes = 0;
};

// Integrity statement structured after the three Operational Guidelines
// headings: (a) elements necessary to express OUV, (b) adequate size and
// representation, (c) adverse effects of development and/or neglect.
struct Statement {
  std::string elements;              // generated
  std::string representation;        // generated
  std::string adverse_effects;       // operator-supplied
  std::string landscape;             // operator-supplied
  std::string condition;             // operator-supplied
};

struct IntegrityReport {
  std::map<std::string, std::string> site_metadata;
  std::vector<StateRow> per_state;
  Survival survival;  // from the earliest state
  Continuity continuity;
  Statement statement;
  std::vector<std::string> warnings;
};

// Operator note keys copied verbatim into the statement.
inline constexpr const char* kNoteAdverseEffects = "adverse_effects";
inline constexpr const char* kNoteLandscape = "landscape";
inline constexpr const char* kNoteCondition = "condition";

// Never throws for a model with at least one state and one attribute;
// sections the model cannot support are reported as warnings.
IntegrityReport integrity_statement(const core::SiteModel& model, const archive::ArchiveStore& store,
                                    const std::map<std::string, std::string>& operator_notes);

// Human-readable rendering.
std::string render_text(const IntegrityReport& report);

}  // namespace chronosite::integrity
