#include "chronosite/project/project.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <set>

#include "chronosite/errors.hpp"
#include "chronosite/geom/cloud_io.hpp"
#include "chronosite/geom/merge.hpp"
#include "chronosite/geom/registration.hpp"
#include "chronosite/project/chunk.hpp"

namespace chronosite::project {

bool valid_identifier(const std::string& id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) != 0 || c == '_' || c == '-' || c == '.';
  }) && id != "." && id != "..";
}

fs::path resolve_project_dir(const std::optional<std::string>& explicit_dir) {
  if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
  if (const char* env = std::getenv("CHRONOSITE_PROJECT"); env != nullptr && *env != '\0') return env;
  return ".";
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidProject("cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_atomic(const fs::path& path, const void* data, std::size_t size) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidProject("cannot write '" + tmp.string() + "'");
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw InvalidProject("short write to '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

// Violations that only resolve once clouds are ingested and merged.
bool cloud_violation(const core::Violation& v) {
  return v.rule == core::Rule::UnknownCloud || v.rule == core::Rule::EmptySegment;
}

std::string describe(const std::vector<core::Violation>& violations) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += v.subject + ": " + core::to_string(v.rule) + " (" + v.detail + ")";
  }
  return out;
}

void sort_manifest_sections(ProjectManifest& m) {
  std::sort(m.clouds.begin(), m.clouds.end(), [](const CloudEntry& a, const CloudEntry& b) { return a.id < b.id; });
  std::sort(m.documents.begin(), m.documents.end(),
            [](const archive::DocumentRecord& a, const archive::DocumentRecord& b) { return a.id < b.id; });
  std::sort(m.persons.begin(), m.persons.end(),
            [](const archive::Person& a, const archive::Person& b) { return a.id < b.id; });
  std::sort(m.links.begin(), m.links.end());
  m.links.erase(std::unique(m.links.begin(), m.links.end()), m.links.end());
}

}  // namespace

Project Project::create(const fs::path& dir, ProjectManifest site) {
  if (fs::exists(dir / kManifestFile)) throw InvalidProject("'" + dir.string() + "' already contains a project");

  std::vector<core::ReferenceState> states;
  for (const StateEntry& s : site.states) states.push_back(s.state);
  states = core::order_states(std::move(states));
  std::map<core::StateId, std::optional<std::string>> anchors;
  for (const StateEntry& s : site.states) anchors[s.state.id] = s.anchor;

  site.version = kManifestVersion;
  site.states.clear();
  for (core::ReferenceState& s : states) {
    s.cloud_id.reset();
    StateEntry entry;
    entry.anchor = anchors[s.id];
    entry.state = std::move(s);
    site.states.push_back(std::move(entry));
  }
  site.clouds.clear();
  site.built = false;
  site.period_colors.clear();
  if (site.palette.empty()) site.palette = core::default_palette();
  sort_manifest_sections(site);

  for (const StateEntry& s : site.states) {
    if (!valid_identifier(s.state.id)) throw InvalidProject("invalid state id '" + s.state.id + "'");
  }
  std::vector<core::Violation> violations = core::validate_timeline(site_model(site));
  std::erase_if(violations, cloud_violation);
  if (!violations.empty()) throw InvalidProject("invalid timeline: " + describe(violations));
  if (site.palette.size() < site.states.size()) throw InvalidProject("palette has fewer colors than states");
  try {
    (void)archive_store(site);
  } catch (const Error& e) {
    throw InvalidProject(std::string("invalid archive: ") + e.what());
  }

  fs::create_directories(dir / kChunkDir);
  Project project(dir, std::move(site));
  project.save();
  return project;
}

Project Project::open(const fs::path& dir) {
  const fs::path path = dir / kManifestFile;
  if (!fs::exists(path)) throw InvalidProject("no project at '" + dir.string() + "'");
  return Project(dir, parse_manifest(read_file(path)));
}

void Project::save() const {
  const std::string text = serialize(manifest_);
  write_file_atomic(dir_ / kManifestFile, text.data(), text.size());
}

ChunkRef Project::write_chunk(const std::string& name, const geom::PointCloud& cloud) const {
  const std::vector<std::uint8_t> bytes = encode_chunk(cloud);
  const ChunkHeader header = inspect_chunk(bytes);
  const std::string rel = std::string(kChunkDir) + "/" + name + ".cspc";
  fs::create_directories(dir_ / kChunkDir);
  write_file_atomic(dir_ / rel, bytes.data(), bytes.size());
  return {rel, header.points, header.crc32};
}

std::vector<std::uint8_t> Project::read_chunk(const ChunkRef& ref) const {
  if (!fs::is_regular_file(dir_ / ref.file)) throw ChunkError("chunk '" + ref.file + "' is missing");
  const std::string text = read_file(dir_ / ref.file);
  std::vector<std::uint8_t> bytes(text.begin(), text.end());
  const ChunkHeader header = inspect_chunk(bytes);
  if (header.points != ref.points || header.crc32 != ref.crc32) {
    throw ChunkError("chunk '" + ref.file + "' does not match the manifest");
  }
  return bytes;
}

geom::PointCloud Project::load_chunk(const ChunkRef& ref) const { return decode_chunk(read_chunk(ref)); }

void Project::invalidate_build() {
  manifest_.built = false;
  manifest_.period_colors.clear();
  for (StateEntry& s : manifest_.states) {
    s.state.cloud_id.reset();
    s.chunk.reset();
    s.registrations.clear();
    s.residual.reset();
  }
}

CloudIngest Project::ingest_cloud(const fs::path& file, const core::StateId& state, geom::SourceKind kind,
                                  double unit_scale, std::optional<std::string> cloud_id) {
  if (manifest_.find_state(state) == nullptr) throw UnknownState("unknown reference state '" + state + "'");
  geom::PointCloud cloud = geom::read_cloud(file);
  geom::validate(cloud);
  cloud = geom::harmonize(cloud, unit_scale);
  cloud.source_kind = kind;

  const std::string id = cloud_id.value_or(file.stem().string());
  if (!valid_identifier(id)) throw InvalidProject("invalid cloud id '" + id + "'");

  const std::vector<std::uint8_t> bytes = encode_chunk(cloud);
  const ChunkHeader header = inspect_chunk(bytes);
  for (const CloudEntry& c : manifest_.clouds) {
    if (c.state_id == state && c.chunk.crc32 == header.crc32 && c.chunk.points == header.points) {
      return {c.id, cloud.size(), true};
    }
  }
  if (std::any_of(manifest_.clouds.begin(), manifest_.clouds.end(), [&](const CloudEntry& c) { return c.id == id; })) {
    throw DuplicateId("cloud id '" + id + "' is already used");
  }

  CloudEntry entry;
  entry.id = id;
  entry.state_id = state;
  entry.kind = kind;
  entry.source_id = cloud.source_id;
  entry.unit_scale = unit_scale;
  entry.chunk = write_chunk("cloud-" + id, cloud);
  manifest_.clouds.push_back(std::move(entry));
  invalidate_build();
  sort_manifest_sections(manifest_);
  return {id, cloud.size(), false};
}

RecordIngest Project::ingest_records(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open '" + file.string() + "'", 0);

  ProjectManifest next = manifest_;
  archive::ArchiveStore store = archive_store(next);
  RecordIngest outcome;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      if (!j.is_object()) throw ParseError("record must be an object", line_no);
      const std::string type = j.value("type", std::string("document"));
      if (type == "document") {
        archive::DocumentRecord d = document_from_json(j);
        if (!valid_identifier(d.id)) throw ParseError("invalid document id '" + d.id + "'", line_no);
        if (const archive::DocumentRecord* existing = store.find(d.id)) {
          archive::DocumentRecord lowered = d;
          lowered.keywords.clear();
          for (const auto& k : d.keywords) lowered.keywords.insert(archive::to_lower(k));
          if (*existing == lowered) {
            outcome.warnings.push_back("line " + std::to_string(line_no) + ": document '" + d.id +
                                       "' already ingested, skipped");
            continue;
          }
          throw DuplicateId("line " + std::to_string(line_no) + ": document '" + d.id +
                            "' already exists with different content");
        }
        store.index_document(d);
        next.documents.push_back(store.document(d.id));
        ++outcome.documents;
      } else if (type == "person") {
        archive::Person p = person_from_json(j);
        auto it = store.persons().find(p.id);
        if (it != store.persons().end()) {
          if (it->second == p) {
            outcome.warnings.push_back("line " + std::to_string(line_no) + ": person '" + p.id +
                                       "' already ingested, skipped");
            continue;
          }
          throw DuplicateId("line " + std::to_string(line_no) + ": person '" + p.id +
                            "' already exists with different content");
        }
        store.add_person(p);
        next.persons.push_back(std::move(p));
        ++outcome.persons;
      } else if (type == "link") {
        const std::string doc = j.at("document").get<std::string>();
        const std::string attr = j.at("attribute").get<std::string>();
        store.link_to_geometry(doc, attr);
        next.links.emplace_back(doc, attr);
        ++outcome.links;
      } else {
        throw ParseError("unknown record type '" + type + "'", line_no);
      }
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }

  for (const auto& [doc, entity] : store.dangling_mentions()) {
    outcome.warnings.push_back("document '" + doc + "' mentions unknown entity '" + entity + "'");
  }
  sort_manifest_sections(next);
  manifest_ = std::move(next);
  return outcome;
}

BuildOutcome Project::build(const BuildOptions& options) {
  ProjectManifest next = manifest_;
  if (options.voxel_size) next.build.voxel_size = *options.voxel_size;
  if (options.max_iterations) next.build.max_iterations = *options.max_iterations;
  if (options.trim_fraction) next.build.trim_fraction = *options.trim_fraction;
  if (!(next.build.voxel_size > 0.0)) throw InvalidVoxelSize("voxel size must be positive");
  if (!(next.build.trim_fraction >= 0.0 && next.build.trim_fraction < 1.0)) {
    throw InvalidProject("trim fraction must lie in [0, 1)");
  }
  for (const auto& [state, cloud] : options.anchors) {
    StateEntry* s = next.find_state(state);
    if (s == nullptr) throw UnknownState("unknown reference state '" + state + "'");
    s->anchor = cloud;
  }

  std::vector<core::Violation> violations = core::validate_timeline(site_model(next));
  std::erase_if(violations, [](const core::Violation& v) {
    return cloud_violation(v) && v.detail.find("merged/") != std::string::npos;
  });
  if (!violations.empty()) throw InvalidProject("invalid timeline: " + describe(violations));
  if (next.palette.size() < next.states.size()) throw InvalidProject("palette has fewer colors than states");

  const geom::IcpParams icp = next.build.icp();
  BuildOutcome outcome;
  std::vector<std::pair<std::string, geom::PointCloud>> chunks;

  for (StateEntry& s : next.states) {
    s.state.cloud_id.reset();
    s.chunk.reset();
    s.registrations.clear();
    s.residual.reset();

    std::vector<const CloudEntry*> clouds;
    for (const CloudEntry& c : next.clouds) {
      if (c.state_id == s.state.id) clouds.push_back(&c);
    }
    if (clouds.empty()) {
      outcome.warnings.push_back("state '" + s.state.id + "' has no clouds");
      continue;
    }

    const CloudEntry* anchor = nullptr;
    if (s.anchor) {
      for (const CloudEntry* c : clouds) {
        if (c->id == *s.anchor) anchor = c;
      }
      if (anchor == nullptr) {
        throw InvalidProject("anchor '" + *s.anchor + "' is not a cloud of state '" + s.state.id + "'");
      }
    } else {
      anchor = *std::min_element(clouds.begin(), clouds.end(), [](const CloudEntry* a, const CloudEntry* b) {
        return a->chunk.points > b->chunk.points || (a->chunk.points == b->chunk.points && a->id < b->id);
      });
    }

    const geom::PointCloud target = load_chunk(anchor->chunk);
    std::vector<geom::PointCloud> aligned{target};
    ResidualSummary summary;
    summary.clouds = clouds.size();
    s.registrations.push_back({anchor->id, true, geom::RigidTransform::identity(), 0.0, 0.0, 1.0, 0, true});

    for (const CloudEntry* c : clouds) {
      if (c == anchor) continue;
      const geom::PointCloud source = load_chunk(c->chunk);
      const geom::RegistrationResult r = geom::register_icp(source, target, icp);
      s.registrations.push_back(
          {c->id, false, r.transform, r.rms_residual, r.max_residual, r.inlier_fraction, r.iterations, r.converged});
      summary.rms = std::max(summary.rms, r.rms_residual);
      summary.max = std::max(summary.max, r.max_residual);
      summary.inlier_fraction = std::min(summary.inlier_fraction, r.inlier_fraction);
      summary.converged = summary.converged && r.converged;
      if (!r.converged) {
        outcome.all_converged = false;
        outcome.warnings.push_back("registration of '" + c->id + "' onto '" + anchor->id + "' did not converge");
      }
      aligned.push_back(geom::apply_transform(source, r.transform));
    }

    geom::PointCloud merged = geom::merge_clouds(aligned, next.build.voxel_size);
    merged.source_id = merged_cloud_id(s.state.id);
    s.residual = summary;
    s.state.cloud_id = merged_cloud_id(s.state.id);
    chunks.emplace_back(s.state.id, std::move(merged));
    ++outcome.states_built;
  }
  if (outcome.states_built == 0) throw InvalidProject("no reference state has clouds");

  for (const auto& [state, cloud] : chunks) next.find_state(state)->chunk = write_chunk("state-" + state, cloud);
  next.period_colors = core::assign_period_colors(site_model(next), next.palette);
  next.built = true;

  for (const core::Violation& v : core::validate_timeline(site_model(next))) {
    outcome.warnings.push_back(v.subject + ": " + core::to_string(v.rule) + " (" + v.detail + ")");
  }
  manifest_ = std::move(next);
  save();
  return outcome;
}

integrity::IntegrityReport Project::report(const std::map<std::string, std::string>& notes) const {
  return integrity::integrity_statement(model(), store(), notes);
}

json report_json(const integrity::IntegrityReport& report, const ProjectManifest& manifest) {
  json j;
  j["site_metadata"] = report.site_metadata;
  j["per_state"] = json::array();
  for (const auto& row : report.per_state) {
    j["per_state"].push_back({{"state_id", row.state_id},
                              {"year", row.year},
                              {"active_attributes", row.active_attributes},
                              {"inventory_completeness", row.inventory_completeness},
                              {"evidence_coverage", row.evidence_coverage}});
  }
  j["survival"] = {{"reference_state_id", report.survival.reference_state_id},
                   {"fraction_surviving", report.survival.fraction},
                   {"surviving_ids", report.survival.surviving_ids},
                   {"lost_ids", report.survival.lost_ids}};
  json gaps = json::array();
  for (const auto& [lo, hi] : report.continuity.gaps) gaps.push_back({lo, hi});
  j["continuity"] = {{"continuous", report.continuity.continuous}, {"gaps", gaps}};
  j["statement"] = {{"a_elements", report.statement.elements},
                    {"b_representation", report.statement.representation},
                    {"c_adverse_effects", report.statement.adverse_effects},
                    {"landscape", report.statement.landscape},
                    {"condition", report.statement.condition},
                    {"operator_supplied", {"c_adverse_effects", "condition", "landscape"}}};
  j["warnings"] = report.warnings;

  json residuals = json::array();
  for (const StateEntry& s : manifest.states) {
    if (!s.residual) continue;
    residuals.push_back({{"state_id", s.state.id},
                         {"rms_m", s.residual->rms},
                         {"max_m", s.residual->max},
                         {"inlier_fraction", s.residual->inlier_fraction},
                         {"converged", s.residual->converged},
                         {"clouds", s.residual->clouds}});
  }
  j["registration_residuals"] = {
      {"description", "estimated margin of error: nearest-neighbour residuals of each state's cloud registration"},
      {"inlier_threshold_m", 3.0 * manifest.build.voxel_size},
      {"states", residuals}};
  return j;
}

}  // namespace chronosite::project
