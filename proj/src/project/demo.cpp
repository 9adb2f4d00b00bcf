#include "chronosite/project/demo.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>

#include "chronosite/core/site_model.hpp"
#include "chronosite/errors.hpp"
#include "chronosite/geom/rigid_transform.hpp"
#include "chronosite/project/manifest.hpp"

namespace chronosite::project {

namespace {

namespace fs = std::filesystem;

// Raw mt19937_64 output is fixed by the standard; the helpers below avoid
// <random> distributions, whose algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  double gaussian() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

struct DemoState {
  const char* id;
  const char* label;
  int year;
};

// Constructed fixture years spanning 144 years; not historical claims.
constexpr std::array<DemoState, 6> kStates{{
    {"s1873", "Meteorological station beginnings", 1873},
    {"s1885", "Observatory foundation", 1885},
    {"s1908", "First instrument campaign", 1908},
    {"s1946", "Post-war scientific expansion", 1946},
    {"s1980", "Large telescope era", 1980},
    {"s2017", "Present state", 2017},
}};

struct DemoAttribute {
  const char* id;
  const char* name;
  core::AttributeKind kind;
  int start;
  int end;  // 0 = open
  std::array<double, 3> center;  // x, y in meters; z offset above terrain
  std::array<double, 3> size;
  const char* purpose;
  const char* designer;  // person id or ""
};

constexpr std::array<DemoAttribute, 16> kAttributes{{
    {"a01", "Summit meteorological hut", core::AttributeKind::Building, 1873, 1890, {-20, 5, 0}, {6, 4, 3},
     "meteorological observations", "p01"},
    {"a02", "Main observatory building", core::AttributeKind::Building, 1882, 0, {0, 0, 0}, {24, 12, 9},
     "living and working quarters", "p01"},
    {"a03", "Mule track", core::AttributeKind::Access, 1873, 1952, {-38, -18, 0}, {16, 3, 0.6},
     "summit supply route", ""},
    {"a04", "Meteorological tower", core::AttributeKind::Facility, 1882, 1936, {10, 9, 0}, {3, 3, 12},
     "wind and lightning measurements", "p02"},
    {"a05", "First equatorial dome", core::AttributeKind::Instrument, 1906, 0, {18, -6, 0}, {7, 7, 7},
     "visual astronomy", "p05"},
    {"a06", "Living quarters wing", core::AttributeKind::Building, 1906, 0, {-8, -12, 0}, {14, 6, 6},
     "wintering crew housing", "p05"},
    {"a07", "Cable car upper station", core::AttributeKind::Access, 1952, 0, {-30, -5, 0}, {10, 8, 8},
     "personnel and material access", "p02"},
    {"a08", "Coronagraph dome", core::AttributeKind::Instrument, 1936, 0, {28, 6, 0}, {6, 6, 6},
     "solar corona observation", "p05"},
    {"a09", "Power line pylon", core::AttributeKind::Facility, 1949, 0, {-40, 14, 0}, {2, 2, 14},
     "electricity supply", ""},
    {"a10", "One-metre telescope dome", core::AttributeKind::Instrument, 1963, 0, {32, -14, 0}, {9, 9, 9},
     "planetary imaging", "p05"},
    {"a11", "Transmission tower", core::AttributeKind::Facility, 1957, 0, {-15, 20, 0}, {4, 4, 30},
     "television relay", ""},
    {"a12", "Large telescope dome", core::AttributeKind::Instrument, 1980, 0, {40, 4, 0}, {12, 12, 12},
     "stellar spectroscopy", "p05"},
    {"a13", "Laboratory annex", core::AttributeKind::Building, 1910, 1975, {6, 18, 0}, {10, 5, 5},
     "atmospheric physics laboratory", "p01"},
    {"a14", "Museum and visitor centre", core::AttributeKind::Building, 2000, 0, {-22, -22, 0}, {16, 8, 6},
     "public interpretation", ""},
    {"a15", "Panorama terrace", core::AttributeKind::Access, 1885, 0, {12, -22, 0}, {14, 6, 0.8},
     "observation platform", ""},
    {"a16", "Wooden refuge", core::AttributeKind::Building, 1873, 1881, {-26, 12, 0}, {4, 3, 2.5},
     "temporary shelter", ""},
}};

struct DemoPerson {
  const char* id;
  const char* name;
  std::vector<archive::Role> roles;
};

const std::vector<DemoPerson>& demo_persons() {
  static const std::vector<DemoPerson> persons{
      {"p01", "A. Durand", {archive::Role::Designer}},
      {"p02", "B. Lefevre", {archive::Role::Builder}},
      {"p03", "C. Marchand", {archive::Role::Scientist}},
      {"p04", "D. Roussel", {archive::Role::Director}},
      {"p05", "E. Garnier", {archive::Role::Designer, archive::Role::Scientist}},
  };
  return persons;
}

double terrain_height(double x, double y) {
  const double r = std::sqrt(x * x + (y / 0.7) * (y / 0.7));
  const double ridge = 4.0 * std::exp(-((y - 0.25 * x) * (y - 0.25 * x)) / 60.0);
  return 20.0 - 0.3 * r + ridge + 1.5 * std::sin(x / 7.0) * std::cos(y / 5.0) + 0.8 * std::sin((x + 2.0 * y) / 11.0);
}

bool active(const DemoAttribute& a, int year) { return year >= a.start && (a.end == 0 || year <= a.end); }

Rgb kind_color(core::AttributeKind kind) {
  switch (kind) {
    case core::AttributeKind::Building:
      return {200, 190, 170};
    case core::AttributeKind::Instrument:
      return {235, 235, 240};
    case core::AttributeKind::Facility:
      return {150, 60, 50};
    case core::AttributeKind::Access:
      return {90, 90, 90};
  }
  return {128, 128, 128};
}

struct ScenePoint {
  geom::Point p;
  Rgb color;
};

double box_base(const DemoAttribute& a) { return terrain_height(a.center[0], a.center[1]) + a.center[2]; }

// One point sampled from the site as it stood in `year`: terrain or the
// exposed faces (top and sides) of an active attribute's box.
ScenePoint sample_scene(Rng& rng, int year) {
  std::vector<const DemoAttribute*> live;
  std::vector<double> areas;
  double total = 0.0;
  for (const DemoAttribute& a : kAttributes) {
    if (!active(a, year)) continue;
    const double area = a.size[0] * a.size[1] + 2.0 * a.size[2] * (a.size[0] + a.size[1]);
    live.push_back(&a);
    areas.push_back(area);
    total += area;
  }

  if (live.empty() || rng.uniform() < 0.55) {
    const double r = 60.0 * std::sqrt(rng.uniform());
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double x = r * std::cos(theta);
    const double y = 0.7 * r * std::sin(theta);
    const auto shade = static_cast<std::uint8_t>(100 + rng.index(30));
    return {{x, y, terrain_height(x, y)}, {shade, static_cast<std::uint8_t>(shade - 8), static_cast<std::uint8_t>(shade - 16)}};
  }

  double pick = rng.uniform(0.0, total);
  std::size_t k = 0;
  while (k + 1 < live.size() && pick > areas[k]) {
    pick -= areas[k];
    ++k;
  }
  const DemoAttribute& a = *live[k];
  const double hx = a.size[0] / 2.0;
  const double hy = a.size[1] / 2.0;
  const double base = box_base(a);
  const double top_area = a.size[0] * a.size[1];
  const double side_x = a.size[2] * a.size[0];
  const double side_y = a.size[2] * a.size[1];
  double face = rng.uniform(0.0, top_area + 2.0 * side_x + 2.0 * side_y);
  double x = 0, y = 0, z = 0;
  if (face < top_area) {
    x = rng.uniform(-hx, hx);
    y = rng.uniform(-hy, hy);
    z = a.size[2];
  } else if ((face -= top_area) < 2.0 * side_x) {
    x = rng.uniform(-hx, hx);
    y = face < side_x ? -hy : hy;
    z = rng.uniform(0.0, a.size[2]);
  } else {
    x = face - 2.0 * side_x < side_y ? -hx : hx;
    y = rng.uniform(-hy, hy);
    z = rng.uniform(0.0, a.size[2]);
  }
  return {{a.center[0] + x, a.center[1] + y, base + z}, kind_color(a.kind)};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

std::string point_line(const geom::Point& p, const Rgb& c, int decimals) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.*f %.*f %.*f %d %d %d\n", decimals, p.x(), decimals, p.y(), decimals, p.z(),
                c.r, c.g, c.b);
  return buf;
}

constexpr double kModelScale = 500.0;
constexpr std::size_t kModelPoints = 40000;
constexpr std::size_t kAerialPoints = 6000;

void write_clouds(const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t s = 0; s < kStates.size(); ++s) {
    const DemoState& st = kStates[s];

    // Scale-model scan: full site, model units (1:500), XYZ with colors.
    Rng model_rng(1000 + s);
    std::string xyz = "# scale model scan, 1:500, state " + std::string(st.id) + "\n";
    for (std::size_t i = 0; i < kModelPoints; ++i) {
      const ScenePoint sp = sample_scene(model_rng, st.year);
      xyz += point_line(sp.p / kModelScale, sp.color, 7);
    }
    write_text(dir / ("model-" + std::string(st.id) + ".xyz"), xyz);

    // Aerial cloud: the site minus its western flank, independently sampled,
    // 2 cm noise, and offset by a small georeferencing error.
    Rng aerial_rng(2000 + s);
    geom::RigidTransform offset;
    offset.rotation = geom::axis_angle({0.1, 0.05, 1.0}, (0.5 + 0.1 * static_cast<double>(s)) * std::numbers::pi / 180.0);
    offset.translation = {0.3 - 0.03 * static_cast<double>(s), -0.2, 0.1};
    std::string body;
    std::size_t n = 0;
    while (n < kAerialPoints) {
      const ScenePoint sp = sample_scene(aerial_rng, st.year);
      if (sp.p.x() < -28.0) continue;
      geom::Point noisy = sp.p + 0.02 * geom::Point(aerial_rng.gaussian(), aerial_rng.gaussian(), aerial_rng.gaussian());
      body += point_line(offset.apply(noisy), sp.color, 4);
      ++n;
    }
    std::string ply = "ply\nformat ascii 1.0\ncomment aerial survey, state " + std::string(st.id) +
                      "\nelement vertex " + std::to_string(n) +
                      "\nproperty float x\nproperty float y\nproperty float z\n"
                      "property uchar red\nproperty uchar green\nproperty uchar blue\nend_header\n";
    write_text(dir / ("aerial-" + std::string(st.id) + ".ply"), ply + body);
  }
}

int first_state_at_or_after(int year) {
  for (std::size_t s = 0; s < kStates.size(); ++s) {
    if (kStates[s].year >= year) return static_cast<int>(s);
  }
  return static_cast<int>(kStates.size()) - 1;
}

ProjectManifest demo_site() {
  ProjectManifest m;
  m.site_metadata = {
      {"name", "High-mountain observatory (demo)"},
      {"elevation_m", "2860"},
      {"first_regular_use", "1883"},
      {"fixture_note", "constructed demonstration data; state years and attributes are not historical claims"},
  };
  for (const DemoState& st : kStates) {
    StateEntry e;
    e.state.id = st.id;
    e.state.label = st.label;
    e.state.year = st.year;
    m.states.push_back(e);
  }
  for (const DemoAttribute& d : kAttributes) {
    core::Attribute a;
    a.id = d.id;
    a.name = d.name;
    a.kind = d.kind;
    a.existence = d.end == 0 ? core::TimeInterval::open(d.start) : core::TimeInterval::closed(d.start, d.end);
    a.metadata["purpose"] = d.purpose;
    a.metadata["date_of_implementation"] = std::to_string(d.start);
    if (*d.designer != '\0') {
      for (const DemoPerson& p : demo_persons()) {
        if (std::string(p.id) == d.designer) a.metadata["designer"] = p.name;
      }
    }
    const double base = box_base(d);
    core::BoundingBox box;
    box.min = {d.center[0] - d.size[0] / 2, d.center[1] - d.size[1] / 2, base};
    box.max = {d.center[0] + d.size[0] / 2, d.center[1] + d.size[1] / 2, base + d.size[2]};
    a.geometry = core::GeometrySegment{"model-" + std::string(kStates[first_state_at_or_after(d.start)].id), box};
    m.attributes.push_back(std::move(a));
  }
  for (const DemoPerson& p : demo_persons()) {
    m.persons.push_back({p.id, p.name, {p.roles.begin(), p.roles.end()}});
  }
  m.palette = core::default_palette();
  return m;
}

std::string records_jsonl() {
  static const char* const kCollections[] = {"departmental-archives", "observatory-library", "private-collection",
                                             "photo-library"};
  static const char* const kKindWords[][3] = {
      {"construction", "facade", "snow"}, {"dome", "telescope", "observation"},
      {"mast", "meteorology", "cable"},   {"path", "access", "winter"}};

  Rng rng(77);
  std::string out;
  for (int i = 1; i <= 48; ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "d%03d", i);
    archive::DocumentRecord d;
    d.id = id;
    d.kind = static_cast<archive::DocumentKind>(rng.index(4));

    // Anchor the document on one attribute and a year within its existence.
    const DemoAttribute& main = kAttributes[rng.index(kAttributes.size())];
    const int last = main.end == 0 ? 2017 : main.end;
    const int year = main.start + static_cast<int>(rng.index(static_cast<std::size_t>(last - main.start + 1)));
    d.mentions.insert(main.id);
    for (const DemoAttribute& other : kAttributes) {
      if (&other != &main && active(other, year) && rng.uniform() < 0.12) d.mentions.insert(other.id);
    }
    if (rng.uniform() < 0.4) d.mentions.insert(demo_persons()[rng.index(demo_persons().size())].id);

    const bool undated = d.kind == archive::DocumentKind::Photo && rng.uniform() < 0.6;
    if (!undated) {
      const int span = static_cast<int>(rng.index(4));
      d.date = core::TimeInterval::closed(year, year + span);
    }
    if (d.kind == archive::DocumentKind::Photo) d.viewpoint = rng.uniform() < 0.8 ? "summit" : "aerial";

    for (const char* w : kKindWords[static_cast<int>(main.kind)]) {
      if (rng.uniform() < 0.6) d.keywords.insert(w);
    }
    if (year < 1900) d.keywords.insert("origins");
    d.collection = kCollections[rng.index(4)];
    d.uri = "archive://" + d.collection + "/" + d.id;

    json j = to_json(d);
    out += j.dump() + "\n";
  }
  // Plans link straight to the geometry they depict.
  const std::pair<const char*, const char*> links[] = {{"d003", "a02"}, {"d011", "a05"}, {"d019", "a12"},
                                                       {"d027", "a07"}, {"d035", "a14"}};
  for (const auto& [doc, attr] : links) {
    out += json{{"type", "link"}, {"document", doc}, {"attribute", attr}}.dump() + "\n";
  }
  return out;
}

}  // namespace

void write_demo_inputs(const fs::path& dir) {
  fs::create_directories(dir);
  write_text(dir / "site.json", to_json(demo_site()).dump(2) + "\n");
  write_text(dir / "records.jsonl", records_jsonl());
  const json notes{
      {"adverse_effects", "Operator assessment required: tourism infrastructure and telecommunication masts."},
      {"landscape", "Operator assessment required: summit silhouette seen from the valley."},
      {"condition", "Operator assessment required: physical fabric condition of each building."},
  };
  write_text(dir / "notes.json", notes.dump(2) + "\n");
  write_clouds(dir / "clouds");
}

std::vector<std::vector<std::string>> demo_pipeline(const fs::path& data_dir, const fs::path& project_dir) {
  const std::string project = project_dir.string();
  std::vector<std::vector<std::string>> cmds;
  cmds.push_back({"init", "--project", project, "--site", (data_dir / "site.json").string()});
  for (const DemoState& st : kStates) {
    cmds.push_back({"ingest", "--project", project, "--cloud",
                    (data_dir / "clouds" / ("model-" + std::string(st.id) + ".xyz")).string(), "--state", st.id,
                    "--kind", "scale_model_scan", "--scale", "500"});
    cmds.push_back({"ingest", "--project", project, "--cloud",
                    (data_dir / "clouds" / ("aerial-" + std::string(st.id) + ".ply")).string(), "--state", st.id,
                    "--kind", "aerial", "--scale", "1"});
  }
  cmds.push_back({"ingest", "--project", project, "--records", (data_dir / "records.jsonl").string()});
  cmds.push_back({"build", "--project", project});
  return cmds;
}

}  // namespace chronosite::project
