#include "chronosite/project/manifest.hpp"

#include <algorithm>

#include "chronosite/errors.hpp"

namespace chronosite::project {

geom::IcpParams BuildParams::icp() const {
  geom::IcpParams p;
  p.max_iterations = max_iterations;
  p.convergence_tol_m = convergence_tol_m;
  p.trim_fraction = trim_fraction;
  p.estimate_scale = estimate_scale;
  p.inlier_threshold_m = 3.0 * voxel_size;
  return p;
}

const StateEntry* ProjectManifest::find_state(const core::StateId& id) const {
  auto it = std::find_if(states.begin(), states.end(), [&](const StateEntry& s) { return s.state.id == id; });
  return it == states.end() ? nullptr : &*it;
}

StateEntry* ProjectManifest::find_state(const core::StateId& id) {
  return const_cast<StateEntry*>(std::as_const(*this).find_state(id));
}

std::string merged_cloud_id(const core::StateId& state) { return "merged/" + state; }

// ---------------------------------------------------------------------------
// leaf types

namespace {

json rgb_json(const Rgb& c) { return json::array({c.r, c.g, c.b}); }

Rgb rgb_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw InvalidProject("color must be [r, g, b]");
  return {j.at(0).get<std::uint8_t>(), j.at(1).get<std::uint8_t>(), j.at(2).get<std::uint8_t>()};
}

json chunk_json(const ChunkRef& c) { return {{"file", c.file}, {"points", c.points}, {"crc32", c.crc32}}; }

ChunkRef chunk_from(const json& j) {
  return {j.at("file").get<std::string>(), j.at("points").get<std::uint64_t>(), j.at("crc32").get<std::uint32_t>()};
}

template <typename T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json segment_json(const core::GeometrySegment& s) {
  json j{{"cloud_id", s.cloud_id}};
  if (const auto* r = std::get_if<core::IndexRange>(&s.region)) {
    j["range"] = {r->begin, r->end};
  } else {
    const auto& b = std::get<core::BoundingBox>(s.region);
    j["box"] = {{"min", b.min}, {"max", b.max}};
  }
  return j;
}

core::GeometrySegment segment_from(const json& j) {
  core::GeometrySegment s;
  s.cloud_id = j.at("cloud_id").get<std::string>();
  if (j.contains("range")) {
    s.region = core::IndexRange{j.at("range").at(0).get<std::size_t>(), j.at("range").at(1).get<std::size_t>()};
  } else if (j.contains("box")) {
    s.region = core::BoundingBox{j.at("box").at("min").get<std::array<double, 3>>(),
                                 j.at("box").at("max").get<std::array<double, 3>>()};
  } else {
    throw InvalidProject("geometry segment needs a range or a box");
  }
  return s;
}

}  // namespace

json to_json(const core::TimeInterval& t) {
  return {{"start", t.start}, {"end", t.end ? json(*t.end) : json(nullptr)}};
}

core::TimeInterval interval_from_json(const json& j) {
  core::TimeInterval t;
  t.start = j.at("start").get<core::Year>();
  t.end = optional_from<core::Year>(j, "end");
  return t;
}

json to_json(const core::Attribute& a) {
  json j{{"id", a.id},
         {"name", a.name},
         {"kind", core::to_string(a.kind)},
         {"existence", to_json(a.existence)},
         {"metadata", a.metadata}};
  j["geometry"] = a.geometry ? segment_json(*a.geometry) : json(nullptr);
  return j;
}

core::Attribute attribute_from_json(const json& j) {
  core::Attribute a;
  a.id = j.at("id").get<std::string>();
  a.name = j.at("name").get<std::string>();
  a.kind = core::attribute_kind_from_string(j.value("kind", std::string("building")));
  a.existence = interval_from_json(j.at("existence"));
  if (j.contains("geometry") && !j.at("geometry").is_null()) a.geometry = segment_from(j.at("geometry"));
  a.metadata = j.value("metadata", std::map<std::string, std::string>{});
  return a;
}

json to_json(const archive::DocumentRecord& d) {
  return {{"id", d.id},
          {"kind", archive::to_string(d.kind)},
          {"date", d.date ? to_json(*d.date) : json(nullptr)},
          {"mentions", d.mentions},
          {"keywords", d.keywords},
          {"collection", d.collection},
          {"uri", d.uri},
          {"viewpoint", optional_json(d.viewpoint)}};
}

archive::DocumentRecord document_from_json(const json& j) {
  archive::DocumentRecord d;
  d.id = j.at("id").get<std::string>();
  d.kind = archive::document_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("date") && !j.at("date").is_null()) d.date = interval_from_json(j.at("date"));
  d.mentions = j.value("mentions", std::set<std::string>{});
  d.keywords = j.value("keywords", std::set<std::string>{});
  d.collection = j.value("collection", std::string());
  d.uri = j.value("uri", std::string());
  d.viewpoint = optional_from<std::string>(j, "viewpoint");
  return d;
}

json to_json(const archive::Person& p) {
  json roles = json::array();
  for (archive::Role r : p.roles) roles.push_back(archive::to_string(r));
  return {{"id", p.id}, {"name", p.name}, {"roles", roles}};
}

archive::Person person_from_json(const json& j) {
  archive::Person p;
  p.id = j.at("id").get<std::string>();
  p.name = j.at("name").get<std::string>();
  for (const auto& r : j.value("roles", json::array())) p.roles.insert(archive::role_from_string(r.get<std::string>()));
  return p;
}

json to_json(const geom::RigidTransform& t) {
  json rot = json::array();
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) rot.push_back(t.rotation(r, c));
  }
  return {{"rotation", rot},
          {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}},
          {"scale", t.scale}};
}

geom::RigidTransform transform_from_json(const json& j) {
  geom::RigidTransform t;
  const json& rot = j.at("rotation");
  if (rot.size() != 9) throw InvalidProject("rotation must have 9 entries");
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) t.rotation(r, c) = rot.at(3 * r + c).get<double>();
  }
  const json& tr = j.at("translation");
  t.translation = {tr.at(0).get<double>(), tr.at(1).get<double>(), tr.at(2).get<double>()};
  t.scale = j.at("scale").get<double>();
  return t;
}

// ---------------------------------------------------------------------------
// manifest

namespace {

json registration_json(const RegistrationRecord& r) {
  return {{"cloud_id", r.cloud_id},   {"anchor", r.anchor},
          {"transform", to_json(r.transform)}, {"rms_residual", r.rms_residual},
          {"max_residual", r.max_residual},    {"inlier_fraction", r.inlier_fraction},
          {"iterations", r.iterations},        {"converged", r.converged}};
}

RegistrationRecord registration_from(const json& j) {
  RegistrationRecord r;
  r.cloud_id = j.at("cloud_id").get<std::string>();
  r.anchor = j.at("anchor").get<bool>();
  r.transform = transform_from_json(j.at("transform"));
  r.rms_residual = j.at("rms_residual").get<double>();
  r.max_residual = j.at("max_residual").get<double>();
  r.inlier_fraction = j.at("inlier_fraction").get<double>();
  r.iterations = j.at("iterations").get<std::size_t>();
  r.converged = j.at("converged").get<bool>();
  return r;
}

json state_json(const StateEntry& s) {
  json j{{"id", s.state.id},
         {"label", s.state.label},
         {"year", s.state.year},
         {"ordinal", s.state.ordinal},
         {"cloud_id", optional_json(s.state.cloud_id)},
         {"anchor", optional_json(s.anchor)},
         {"chunk", s.chunk ? chunk_json(*s.chunk) : json(nullptr)}};
  json regs = json::array();
  for (const auto& r : s.registrations) regs.push_back(registration_json(r));
  j["registrations"] = regs;
  if (s.residual) {
    j["residual"] = {{"rms", s.residual->rms},
                     {"max", s.residual->max},
                     {"inlier_fraction", s.residual->inlier_fraction},
                     {"converged", s.residual->converged},
                     {"clouds", s.residual->clouds}};
  } else {
    j["residual"] = nullptr;
  }
  return j;
}

StateEntry state_from(const json& j, std::size_t position) {
  StateEntry s;
  s.state.id = j.at("id").get<std::string>();
  s.state.label = j.value("label", s.state.id);
  s.state.year = j.at("year").get<core::Year>();
  s.state.ordinal = j.value("ordinal", position);
  s.state.cloud_id = optional_from<std::string>(j, "cloud_id");
  s.anchor = optional_from<std::string>(j, "anchor");
  if (j.contains("chunk") && !j.at("chunk").is_null()) s.chunk = chunk_from(j.at("chunk"));
  for (const auto& r : j.value("registrations", json::array())) s.registrations.push_back(registration_from(r));
  if (j.contains("residual") && !j.at("residual").is_null()) {
    const json& r = j.at("residual");
    s.residual = ResidualSummary{r.at("rms").get<double>(), r.at("max").get<double>(),
                                 r.at("inlier_fraction").get<double>(), r.at("converged").get<bool>(),
                                 r.at("clouds").get<std::size_t>()};
  }
  return s;
}

json cloud_json(const CloudEntry& c) {
  return {{"id", c.id},
          {"state_id", c.state_id},
          {"kind", geom::to_string(c.kind)},
          {"source_id", c.source_id},
          {"unit_scale", c.unit_scale},
          {"chunk", chunk_json(c.chunk)}};
}

CloudEntry cloud_from(const json& j) {
  return {j.at("id").get<std::string>(),
          j.at("state_id").get<std::string>(),
          geom::source_kind_from_string(j.at("kind").get<std::string>()),
          j.at("source_id").get<std::string>(),
          j.at("unit_scale").get<double>(),
          chunk_from(j.at("chunk"))};
}

}  // namespace

json to_json(const ProjectManifest& m) {
  json j;
  j["version"] = m.version;
  j["site_metadata"] = m.site_metadata;
  j["states"] = json::array();
  for (const auto& s : m.states) j["states"].push_back(state_json(s));
  j["clouds"] = json::array();
  for (const auto& c : m.clouds) j["clouds"].push_back(cloud_json(c));
  j["attributes"] = json::array();
  for (const auto& a : m.attributes) j["attributes"].push_back(to_json(a));
  j["persons"] = json::array();
  for (const auto& p : m.persons) j["persons"].push_back(to_json(p));
  j["documents"] = json::array();
  for (const auto& d : m.documents) j["documents"].push_back(to_json(d));
  j["links"] = json::array();
  for (const auto& [doc, attr] : m.links) j["links"].push_back({{"document", doc}, {"attribute", attr}});
  j["palette"] = json::array();
  for (const Rgb& c : m.palette) j["palette"].push_back(rgb_json(c));
  j["build"] = {{"voxel_size", m.build.voxel_size},
                {"max_iterations", m.build.max_iterations},
                {"convergence_tol_m", m.build.convergence_tol_m},
                {"trim_fraction", m.build.trim_fraction},
                {"estimate_scale", m.build.estimate_scale}};
  j["built"] = m.built;
  j["period_colors"] = json::object();
  for (const auto& [id, c] : m.period_colors) j["period_colors"][id] = rgb_json(c);
  return j;
}

ProjectManifest manifest_from_json(const json& j) {
  try {
    ProjectManifest m;
    m.version = j.value("version", kManifestVersion);
    if (m.version != kManifestVersion) throw InvalidProject("unsupported manifest version " + std::to_string(m.version));
    m.site_metadata = j.value("site_metadata", std::map<std::string, std::string>{});
    const json states = j.value("states", json::array());
    for (std::size_t i = 0; i < states.size(); ++i) m.states.push_back(state_from(states[i], i));
    for (const auto& c : j.value("clouds", json::array())) m.clouds.push_back(cloud_from(c));
    for (const auto& a : j.value("attributes", json::array())) m.attributes.push_back(attribute_from_json(a));
    for (const auto& p : j.value("persons", json::array())) m.persons.push_back(person_from_json(p));
    for (const auto& d : j.value("documents", json::array())) m.documents.push_back(document_from_json(d));
    for (const auto& l : j.value("links", json::array())) {
      m.links.emplace_back(l.at("document").get<std::string>(), l.at("attribute").get<std::string>());
    }
    for (const auto& c : j.value("palette", json::array())) m.palette.push_back(rgb_from(c));
    if (j.contains("build")) {
      const json& b = j.at("build");
      m.build.voxel_size = b.value("voxel_size", m.build.voxel_size);
      m.build.max_iterations = b.value("max_iterations", m.build.max_iterations);
      m.build.convergence_tol_m = b.value("convergence_tol_m", m.build.convergence_tol_m);
      m.build.trim_fraction = b.value("trim_fraction", m.build.trim_fraction);
      m.build.estimate_scale = b.value("estimate_scale", m.build.estimate_scale);
    }
    m.built = j.value("built", false);
    const json colors = j.value("period_colors", json::object());
    for (const auto& [id, c] : colors.items()) m.period_colors[id] = rgb_from(c);
    return m;
  } catch (const json::exception& e) {
    throw InvalidProject(std::string("malformed manifest: ") + e.what());
  } catch (const InvalidProject&) {
    throw;
  } catch (const Error& e) {
    throw InvalidProject(std::string("malformed manifest: ") + e.what());
  }
}

std::string serialize(const ProjectManifest& m) { return to_json(m).dump(2) + "\n"; }

ProjectManifest parse_manifest(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidProject(std::string("manifest is not valid JSON: ") + e.what());
  }
  return manifest_from_json(j);
}

core::SiteModel site_model(const ProjectManifest& m) {
  core::SiteModel model;
  model.site_metadata = m.site_metadata;
  for (const StateEntry& s : m.states) {
    model.states.push_back(s.state);
    if (s.state.cloud_id && s.chunk) model.clouds[*s.state.cloud_id] = s.chunk->points;
  }
  for (const CloudEntry& c : m.clouds) model.clouds[c.id] = c.chunk.points;
  model.attributes = m.attributes;
  return model;
}

archive::ArchiveStore archive_store(const ProjectManifest& m) {
  archive::ArchiveStore store;
  for (const core::Attribute& a : m.attributes) store.register_attribute(a.id, a.name);
  for (const archive::Person& p : m.persons) store.add_person(p);
  for (const archive::DocumentRecord& d : m.documents) store.index_document(d);
  for (const auto& [doc, attr] : m.links) store.link_to_geometry(doc, attr);
  return store;
}

}  // namespace chronosite::project
