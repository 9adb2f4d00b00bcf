#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chronosite/geom/point_cloud.hpp"
#include "chronosite/integrity/integrity.hpp"
#include "chronosite/project/manifest.hpp"

namespace chronosite::project {

namespace fs = std::filesystem;

inline constexpr const char* kManifestFile = "manifest.json";
inline constexpr const char* kChunkDir = "chunks";

struct CloudIngest {
  std::string cloud_id;
  std::size_t points = 0;
  bool duplicate = false;  // identical content already ingested for the state
};

struct RecordIngest {
  std::size_t documents = 0;
  std::size_t persons = 0;
  std::size_t links = 0;
  std::vector<std::string> warnings;
};

struct BuildOptions {
  std::optional<double> voxel_size;
  std::optional<std::size_t> max_iterations;
  std::optional<double> trim_fraction;
  std::map<core::StateId, std::string> anchors;  // state -> cloud id
};

struct BuildOutcome {
  std::size_t states_built = 0;
  bool all_converged = true;
  std::vector<std::string> warnings;
};

// A project directory: manifest.json plus a chunks/ directory of CSPC files.
// The in-memory manifest is the working copy; save() persists it.
class Project {
 public:
  // Writes a fresh project from a site description (an unbuilt manifest).
  // States are reordered by year. Throws InvalidProject when the timeline
  // does not validate or the directory already holds a project.
  static Project create(const fs::path& dir, ProjectManifest site);
  static Project open(const fs::path& dir);

  const fs::path& dir() const { return dir_; }
  const ProjectManifest& manifest() const { return manifest_; }

  void save() const;

  // Parses an XYZ/PLY file, scales it by `unit_scale` and stores it as a
  // chunk of `state`. Re-ingesting identical content is a no-op reported as
  // a duplicate. Throws ParseError, UnknownState, InvalidScale, DuplicateId.
  CloudIngest ingest_cloud(const fs::path& file, const core::StateId& state, geom::SourceKind kind,
                           double unit_scale, std::optional<std::string> cloud_id = std::nullopt);

  // Line-delimited JSON records: documents (default), persons
  // ("type": "person") and links ("type": "link"). Identical re-ingested
  // records are skipped with a warning. Throws ParseError with line number.
  RecordIngest ingest_records(const fs::path& file);

  // Registers every state's clouds onto its anchor (largest cloud unless
  // overridden), merges them at the voxel size and writes one chunk per state.
  // Throws InvalidProject when no state has clouds.
  BuildOutcome build(const BuildOptions& options = {});

  std::vector<std::uint8_t> read_chunk(const ChunkRef& ref) const;
  geom::PointCloud load_chunk(const ChunkRef& ref) const;

  core::SiteModel model() const { return site_model(manifest_); }
  archive::ArchiveStore store() const { return archive_store(manifest_); }

  integrity::IntegrityReport report(const std::map<std::string, std::string>& notes) const;

 private:
  Project(fs::path dir, ProjectManifest manifest) : dir_(std::move(dir)), manifest_(std::move(manifest)) {}

  ChunkRef write_chunk(const std::string& name, const geom::PointCloud& cloud) const;
  void invalidate_build();

  fs::path dir_;
  ProjectManifest manifest_;
};

// Integrity report in the manifest's object notation, with the registration
// residuals of each built state appended as the margin-of-error estimate.
json report_json(const integrity::IntegrityReport& report, const ProjectManifest& manifest);

// Resolves the project directory: explicit value, else $CHRONOSITE_PROJECT, else ".".
fs::path resolve_project_dir(const std::optional<std::string>& explicit_dir);

bool valid_identifier(const std::string& id);

}  // namespace chronosite::project
