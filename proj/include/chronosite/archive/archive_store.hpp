#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chronosite/core/site_model.hpp"
#include "chronosite/core/time_interval.hpp"

namespace chronosite::archive {

using DocumentId = std::string;
using EntityId = std::string;

enum class DocumentKind { Photo, Text, Plan, Publication };

std::string to_string(DocumentKind kind);
DocumentKind document_kind_from_string(const std::string& text);

// Archive item. An absent date means UNKNOWN.
struct DocumentRecord {
  DocumentId id;
  DocumentKind kind = DocumentKind::Text;
  std::optional<core::TimeInterval> date;
  std::set<EntityId> mentions;    // attribute and person ids
  std::set<std::string> keywords;  // lowercase tokens
  std::string collection;
  std::string uri;
  std::optional<std::string> viewpoint;

  friend bool operator==(const DocumentRecord&, const DocumentRecord&) = default;
};

enum class Role { Designer, Builder, Scientist, Director };

std::string to_string(Role role);
Role role_from_string(const std::string& text);

struct Person {
  EntityId id;
  std::string name;
  std::set<Role> roles;

  friend bool operator==(const Person&, const Person&) = default;
};

// Bipartite document/entity graph. The association strength of two entities
// is the number of documents mentioning both.
class AssociationGraph {
 public:
  void add_document(const DocumentRecord& record);

  std::size_t weight(const EntityId& a, const EntityId& b) const;
  const std::set<DocumentId>* documents_mentioning(const EntityId& entity) const;
  // entity -> co-mention weight, for every entity sharing a document with `entity`.
  const std::map<EntityId, std::size_t>* neighbors(const EntityId& entity) const;

  const std::map<EntityId, std::set<DocumentId>>& edges() const { return edges_; }

  friend bool operator==(const AssociationGraph&, const AssociationGraph&) = default;

 private:
  std::map<EntityId, std::set<DocumentId>> edges_;
  std::map<EntityId, std::map<EntityId, std::size_t>> co_mentions_;
};

// Conjunctive "simple request". Unset fields do not constrain.
struct QueryFilter {
  std::optional<std::string> building_name;
  std::optional<core::Year> date_year;
  std::optional<std::string> actor_name;
  std::optional<std::string> keyword;
  std::optional<DocumentKind> kind;

  bool empty() const { return !building_name && !date_year && !actor_name && !keyword && !kind; }
};

struct Suggestion {
  EntityId entity;
  std::size_t score = 0;  // number of shared documents
  friend bool operator==(const Suggestion&, const Suggestion&) = default;
};

// Document store with keyword/mention/kind indexes, geometry links and the
// co-mention graph. Mutations either succeed entirely or leave the store
// unchanged. Copies are independent snapshots.
class ArchiveStore {
 public:
  // Throws DuplicateId.
  void add_person(Person person);
  // Makes an attribute known by name (building queries, links). Re-registering
  // an id replaces its name.
  void register_attribute(const EntityId& id, const std::string& name);
  void register_attributes(const core::SiteModel& model);

  // Throws DuplicateId. Keywords are lowercased on entry.
  void index_document(DocumentRecord record);

  // Records a document <-> attribute link. Idempotent. Throws UnknownDocument
  // or UnknownEntity (attribute not registered).
  void link_to_geometry(const DocumentId& doc, const EntityId& attribute);

  const DocumentRecord* find(const DocumentId& id) const;
  const DocumentRecord& document(const DocumentId& id) const;  // throws UnknownDocument
  bool has_entity(const EntityId& id) const;

  // Ordered by (date start ascending, UNKNOWN last, id). Throws EmptyFilter.
  std::vector<DocumentId> query(const QueryFilter& filter) const;

  // Documents linked to the attribute.
  std::set<DocumentId> documents_for(const EntityId& attribute) const;
  // Linked or mentioning documents, in query order.
  std::vector<DocumentId> evidence_for(const EntityId& attribute) const;
  bool has_evidence(const EntityId& attribute) const;

  // Top `k` co-mentioned entities by (score desc, id asc). Throws UnknownEntity.
  std::vector<Suggestion> suggest_associations(const EntityId& entity, std::size_t k) const;

  // (document, entity) pairs whose entity is neither a person nor a registered attribute.
  std::vector<std::pair<DocumentId, EntityId>> dangling_mentions() const;

  const std::map<DocumentId, DocumentRecord>& documents() const { return documents_; }
  const std::map<EntityId, Person>& persons() const { return persons_; }
  const std::map<EntityId, std::string>& attribute_names() const { return attribute_names_; }
  const std::set<std::pair<DocumentId, EntityId>>& links() const { return links_; }
  const AssociationGraph& graph() const { return graph_; }

  friend bool operator==(const ArchiveStore&, const ArchiveStore&) = default;

 private:
  void sort_for_query(std::vector<DocumentId>& ids) const;

  std::map<DocumentId, DocumentRecord> documents_;
  std::map<EntityId, Person> persons_;
  std::map<EntityId, std::string> attribute_names_;
  std::map<std::string, std::set<DocumentId>> keyword_index_;
  std::map<DocumentKind, std::set<DocumentId>> kind_index_;
  std::set<std::pair<DocumentId, EntityId>> links_;
  std::map<EntityId, std::set<DocumentId>> linked_by_attribute_;
  AssociationGraph graph_;
};

// Date suggestion for an undated document: the intersection of the
// existence intervals of every attribute it mentions. nullopt (UNRESOLVED)
// when it mentions no attribute or the intervals are disjoint. Throws
// UnknownDocument, or AlreadyDated when the document has a date.
std::optional<core::TimeInterval> infer_date(const ArchiveStore& store, const core::SiteModel& model,
                                             const DocumentId& doc);

std::string to_lower(std::string text);

}  // namespace chronosite::archive
