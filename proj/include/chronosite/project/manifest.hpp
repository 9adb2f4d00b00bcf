#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "chronosite/archive/archive_store.hpp"
#include "chronosite/color.hpp"
#include "chronosite/core/site_model.hpp"
#include "chronosite/geom/point_cloud.hpp"
#include "chronosite/geom/registration.hpp"
#include "chronosite/geom/rigid_transform.hpp"

namespace chronosite::project {

using json = nlohmann::json;

inline constexpr int kManifestVersion = 1;

struct ChunkRef {
  std::string file;  // relative to the project directory
  std::uint64_t points = 0;
  std::uint32_t crc32 = 0;
  friend bool operator==(const ChunkRef&, const ChunkRef&) = default;
};

// An ingested (harmonized) source cloud.
struct CloudEntry {
  std::string id;
  core::StateId state_id;
  geom::SourceKind kind = geom::SourceKind::ManualScan;
  std::string source_id;
  double unit_scale = 1.0;
  ChunkRef chunk;
  friend bool operator==(const CloudEntry&, const CloudEntry&) = default;
};

struct RegistrationRecord {
  std::string cloud_id;
  bool anchor = false;
  geom::RigidTransform transform;
  double rms_residual = 0.0;
  double max_residual = 0.0;
  double inlier_fraction = 1.0;
  std::size_t iterations = 0;
  bool converged = true;
  friend bool operator==(const RegistrationRecord&, const RegistrationRecord&) = default;
};

// Worst-case residuals over a state's registrations.
struct ResidualSummary {
  double rms = 0.0;
  double max = 0.0;
  double inlier_fraction = 1.0;
  bool converged = true;
  std::size_t clouds = 0;
  friend bool operator==(const ResidualSummary&, const ResidualSummary&) = default;
};

struct StateEntry {
  core::ReferenceState state;
  std::optional<std::string> anchor;  // cloud id override
  std::optional<ChunkRef> chunk;      // merged cloud, once built
  std::vector<RegistrationRecord> registrations;
  std::optional<ResidualSummary> residual;
  friend bool operator==(const StateEntry&, const StateEntry&) = default;
};

struct BuildParams {
  double voxel_size = 0.25;
  std::size_t max_iterations = 50;
  double convergence_tol_m = 1e-6;
  double trim_fraction = 0.1;
  bool estimate_scale = false;

  geom::IcpParams icp() const;
  friend bool operator==(const BuildParams&, const BuildParams&) = default;
};

struct ProjectManifest {
  int version = kManifestVersion;
  std::map<std::string, std::string> site_metadata;
  std::vector<StateEntry> states;
  std::vector<CloudEntry> clouds;
  std::vector<core::Attribute> attributes;
  std::vector<archive::Person> persons;
  std::vector<archive::DocumentRecord> documents;
  std::vector<std::pair<archive::DocumentId, core::AttributeId>> links;
  std::vector<Rgb> palette;
  BuildParams build;
  bool built = false;
  std::map<core::AttributeId, Rgb> period_colors;

  const StateEntry* find_state(const core::StateId& id) const;
  StateEntry* find_state(const core::StateId& id);

  friend bool operator==(const ProjectManifest&, const ProjectManifest&) = default;
};

json to_json(const ProjectManifest& m);
// Missing optional sections take their defaults, so a hand-written site
// description is a valid (unbuilt) manifest. Throws InvalidProject.
ProjectManifest manifest_from_json(const json& j);

// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize(const ProjectManifest& m);
ProjectManifest parse_manifest(const std::string& text);

// JSON forms shared by the manifest, record files and the HTTP API.
json to_json(const core::TimeInterval& t);
core::TimeInterval interval_from_json(const json& j);
json to_json(const core::Attribute& a);
core::Attribute attribute_from_json(const json& j);
json to_json(const archive::DocumentRecord& d);
archive::DocumentRecord document_from_json(const json& j);
json to_json(const archive::Person& p);
archive::Person person_from_json(const json& j);
json to_json(const geom::RigidTransform& t);
geom::RigidTransform transform_from_json(const json& j);

// Views of the manifest used by the analysis modules.
core::SiteModel site_model(const ProjectManifest& m);
archive::ArchiveStore archive_store(const ProjectManifest& m);

std::string merged_cloud_id(const core::StateId& state);

}  // namespace chronosite::project
