#include "chronosite/archive/archive_store.hpp"

#include <algorithm>
#include <cctype>
#include <tuple>

#include "chronosite/errors.hpp"

namespace chronosite::archive {

std::string to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::Photo:
      return "photo";
    case DocumentKind::Text:
      return "text";
    case DocumentKind::Plan:
      return "plan";
    case DocumentKind::Publication:
      return "publication";
  }
  return "text";
}

DocumentKind document_kind_from_string(const std::string& text) {
  if (text == "photo") return DocumentKind::Photo;
  if (text == "text") return DocumentKind::Text;
  if (text == "plan") return DocumentKind::Plan;
  if (text == "publication") return DocumentKind::Publication;
  throw Error("unknown document kind '" + text + "'");
}

std::string to_string(Role role) {
  switch (role) {
    case Role::Designer:
      return "designer";
    case Role::Builder:
      return "builder";
    case Role::Scientist:
      return "scientist";
    case Role::Director:
      return "director";
  }
  return "scientist";
}

Role role_from_string(const std::string& text) {
  if (text == "designer") return Role::Designer;
  if (text == "builder") return Role::Builder;
  if (text == "scientist") return Role::Scientist;
  if (text == "director") return Role::Director;
  throw Error("unknown person role '" + text + "'");
}

std::string to_lower(std::string text) {
  std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
  return text;
}

// ---------------------------------------------------------------------------
// AssociationGraph

void AssociationGraph::add_document(const DocumentRecord& record) {
  for (const EntityId& e : record.mentions) edges_[e].insert(record.id);
  for (auto a = record.mentions.begin(); a != record.mentions.end(); ++a) {
    for (auto b = std::next(a); b != record.mentions.end(); ++b) {
      ++co_mentions_[*a][*b];
      ++co_mentions_[*b][*a];
    }
  }
}

std::size_t AssociationGraph::weight(const EntityId& a, const EntityId& b) const {
  const auto* n = neighbors(a);
  if (n == nullptr) return 0;
  auto it = n->find(b);
  return it == n->end() ? 0 : it->second;
}

const std::set<DocumentId>* AssociationGraph::documents_mentioning(const EntityId& entity) const {
  auto it = edges_.find(entity);
  return it == edges_.end() ? nullptr : &it->second;
}

const std::map<EntityId, std::size_t>* AssociationGraph::neighbors(const EntityId& entity) const {
  auto it = co_mentions_.find(entity);
  return it == co_mentions_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// ArchiveStore

void ArchiveStore::add_person(Person person) {
  if (person.name.empty()) throw Error("person '" + person.id + "' has an empty name");
  if (persons_.count(person.id) != 0) throw DuplicateId("person '" + person.id + "' already exists");
  const EntityId id = person.id;
  persons_.emplace(id, std::move(person));
}

void ArchiveStore::register_attribute(const EntityId& id, const std::string& name) { attribute_names_[id] = name; }

void ArchiveStore::register_attributes(const core::SiteModel& model) {
  for (const core::Attribute& a : model.attributes) register_attribute(a.id, a.name);
}

void ArchiveStore::index_document(DocumentRecord record) {
  if (documents_.count(record.id) != 0) throw DuplicateId("document '" + record.id + "' already exists");
  std::set<std::string> lowered;
  for (const std::string& k : record.keywords) lowered.insert(to_lower(k));
  record.keywords = std::move(lowered);

  for (const std::string& k : record.keywords) keyword_index_[k].insert(record.id);
  kind_index_[record.kind].insert(record.id);
  graph_.add_document(record);
  const DocumentId id = record.id;
  documents_.emplace(id, std::move(record));
}

void ArchiveStore::link_to_geometry(const DocumentId& doc, const EntityId& attribute) {
  if (documents_.count(doc) == 0) throw UnknownDocument("unknown document '" + doc + "'");
  if (attribute_names_.count(attribute) == 0) throw UnknownEntity("unknown attribute '" + attribute + "'");
  links_.emplace(doc, attribute);
  linked_by_attribute_[attribute].insert(doc);
}

const DocumentRecord* ArchiveStore::find(const DocumentId& id) const {
  auto it = documents_.find(id);
  return it == documents_.end() ? nullptr : &it->second;
}

const DocumentRecord& ArchiveStore::document(const DocumentId& id) const {
  const DocumentRecord* d = find(id);
  if (d == nullptr) throw UnknownDocument("unknown document '" + id + "'");
  return *d;
}

bool ArchiveStore::has_entity(const EntityId& id) const {
  return persons_.count(id) != 0 || attribute_names_.count(id) != 0 || graph_.documents_mentioning(id) != nullptr;
}

void ArchiveStore::sort_for_query(std::vector<DocumentId>& ids) const {
  auto key = [this](const DocumentId& id) {
    const DocumentRecord& d = documents_.at(id);
    return std::make_tuple(!d.date.has_value(), d.date ? d.date->start : 0, std::cref(id));
  };
  std::sort(ids.begin(), ids.end(), [&](const DocumentId& a, const DocumentId& b) { return key(a) < key(b); });
}

namespace {

std::set<DocumentId> intersect_sets(const std::set<DocumentId>& a, const std::set<DocumentId>& b) {
  std::set<DocumentId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

}  // namespace

std::vector<DocumentId> ArchiveStore::query(const QueryFilter& filter) const {
  if (filter.empty()) throw EmptyFilter("query needs at least one filter field");

  // Each indexed field yields a candidate set; the result is their intersection.
  std::optional<std::set<DocumentId>> candidates;
  auto narrow = [&](std::set<DocumentId> ids) {
    candidates = candidates ? intersect_sets(*candidates, ids) : std::move(ids);
  };

  if (filter.keyword) {
    auto it = keyword_index_.find(to_lower(*filter.keyword));
    narrow(it == keyword_index_.end() ? std::set<DocumentId>{} : it->second);
  }
  if (filter.kind) {
    auto it = kind_index_.find(*filter.kind);
    narrow(it == kind_index_.end() ? std::set<DocumentId>{} : it->second);
  }
  if (filter.building_name) {
    std::set<DocumentId> ids;
    for (const auto& [attr, name] : attribute_names_) {
      if (name != *filter.building_name) continue;
      if (const auto* docs = graph_.documents_mentioning(attr)) ids.insert(docs->begin(), docs->end());
      if (auto it = linked_by_attribute_.find(attr); it != linked_by_attribute_.end()) {
        ids.insert(it->second.begin(), it->second.end());
      }
    }
    narrow(std::move(ids));
  }
  if (filter.actor_name) {
    std::set<DocumentId> ids;
    for (const auto& [pid, person] : persons_) {
      if (person.name != *filter.actor_name) continue;
      if (const auto* docs = graph_.documents_mentioning(pid)) ids.insert(docs->begin(), docs->end());
    }
    narrow(std::move(ids));
  }

  std::vector<DocumentId> out;
  auto date_ok = [&](const DocumentId& id) {
    if (!filter.date_year) return true;
    const DocumentRecord& d = documents_.at(id);
    return d.date.has_value() && d.date->contains(*filter.date_year);
  };
  if (candidates) {
    for (const DocumentId& id : *candidates) {
      if (date_ok(id)) out.push_back(id);
    }
  } else {
    for (const auto& [id, d] : documents_) {
      if (date_ok(id)) out.push_back(id);
    }
  }
  sort_for_query(out);
  return out;
}

std::set<DocumentId> ArchiveStore::documents_for(const EntityId& attribute) const {
  auto it = linked_by_attribute_.find(attribute);
  return it == linked_by_attribute_.end() ? std::set<DocumentId>{} : it->second;
}

std::vector<DocumentId> ArchiveStore::evidence_for(const EntityId& attribute) const {
  std::set<DocumentId> ids = documents_for(attribute);
  if (const auto* docs = graph_.documents_mentioning(attribute)) ids.insert(docs->begin(), docs->end());
  std::vector<DocumentId> out(ids.begin(), ids.end());
  sort_for_query(out);
  return out;
}

bool ArchiveStore::has_evidence(const EntityId& attribute) const {
  if (auto it = linked_by_attribute_.find(attribute); it != linked_by_attribute_.end() && !it->second.empty()) {
    return true;
  }
  const auto* docs = graph_.documents_mentioning(attribute);
  return docs != nullptr && !docs->empty();
}

std::vector<Suggestion> ArchiveStore::suggest_associations(const EntityId& entity, std::size_t k) const {
  if (!has_entity(entity)) throw UnknownEntity("unknown entity '" + entity + "'");
  std::vector<Suggestion> out;
  if (const auto* n = graph_.neighbors(entity)) {
    for (const auto& [other, score] : *n) out.push_back({other, score});
  }
  std::sort(out.begin(), out.end(), [](const Suggestion& a, const Suggestion& b) {
    return a.score > b.score || (a.score == b.score && a.entity < b.entity);
  });
  if (out.size() > k) out.resize(k);
  return out;
}

std::vector<std::pair<DocumentId, EntityId>> ArchiveStore::dangling_mentions() const {
  std::vector<std::pair<DocumentId, EntityId>> out;
  for (const auto& [id, d] : documents_) {
    for (const EntityId& e : d.mentions) {
      if (persons_.count(e) == 0 && attribute_names_.count(e) == 0) out.emplace_back(id, e);
    }
  }
  return out;
}

std::optional<core::TimeInterval> infer_date(const ArchiveStore& store, const core::SiteModel& model,
                                             const DocumentId& doc) {
  const DocumentRecord& record = store.document(doc);
  if (record.date) throw AlreadyDated("document '" + doc + "' already has a date");

  std::optional<core::TimeInterval> acc;
  bool any = false;
  for (const EntityId& e : record.mentions) {
    const core::Attribute* a = model.find_attribute(e);
    if (a == nullptr) continue;
    if (!any) {
      acc = a->existence;
      any = true;
    } else if (acc) {
      acc = core::intersect(*acc, a->existence);
    }
    if (!acc) return std::nullopt;
  }
  return acc;
}

}  // namespace chronosite::archive
