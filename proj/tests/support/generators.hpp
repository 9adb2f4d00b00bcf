#pragma once

// Seeded random generators for property tests and oracle comparisons.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "chronosite/archive/archive_store.hpp"
#include "chronosite/core/site_model.hpp"
#include "chronosite/geom/point_cloud.hpp"
#include "chronosite/geom/rigid_transform.hpp"

namespace testsupport {

namespace core = chronosite::core;
namespace geom = chronosite::geom;
namespace archive = chronosite::archive;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : engine_(seed) {}

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine_); }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double gaussian(double sigma) { return std::normal_distribution<double>(0.0, sigma)(engine_); }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }
  std::uint8_t byte() { return static_cast<std::uint8_t>(integer(0, 255)); }

  template <typename T>
  void shuffle(std::vector<T>& v) { std::shuffle(v.begin(), v.end(), engine_); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

inline std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%03zu", prefix, i);
  return buf;
}

// States with distinct years in [1850, 2020]; attributes with random valid
// intervals, about a quarter of them open.
inline core::SiteModel random_model(Gen& g, std::size_t attributes = 20, std::size_t states = 6) {
  core::SiteModel m;
  std::set<int> years;
  while (years.size() < states) years.insert(g.integer(1850, 2020));
  std::size_t ordinal = 0;
  for (int y : years) {
    m.states.push_back({numbered("s", ordinal), "state " + std::to_string(y), y, ordinal, std::nullopt});
    ++ordinal;
  }
  static const core::AttributeKind kinds[] = {core::AttributeKind::Building, core::AttributeKind::Facility,
                                              core::AttributeKind::Instrument, core::AttributeKind::Access};
  for (std::size_t i = 0; i < attributes; ++i) {
    core::Attribute a;
    a.id = numbered("a", i);
    a.name = "attribute " + std::to_string(g.integer(0, static_cast<int>(attributes)));
    a.kind = kinds[g.index(4)];
    // Redraw until the interval overlaps the state span, as a valid model requires.
    const int first = m.states.front().year;
    const int last = m.states.back().year;
    do {
      const int start = g.integer(1840, 2020);
      a.existence = g.coin(0.25) ? core::TimeInterval::open(start)
                                 : core::TimeInterval::closed(start, start + g.integer(0, 80));
    } while (a.existence.start > last || (a.existence.end && *a.existence.end < first));
    m.attributes.push_back(std::move(a));
  }
  return m;
}

struct RandomArchive {
  std::vector<archive::Person> persons;
  std::vector<archive::DocumentRecord> documents;
  std::vector<std::pair<archive::DocumentId, core::AttributeId>> links;
};

// Documents over the model's attributes and a handful of persons. Names and
// keywords come from small vocabularies so filters hit often.
inline RandomArchive random_archive(Gen& g, const core::SiteModel& model, std::size_t documents,
                                    std::size_t persons = 8) {
  static const char* const kWords[] = {"dome", "Snow", "construction", "telescope", "path", "winter", "roof", "MAST"};
  static const char* const kNames[] = {"A. Durand", "B. Lefevre", "C. Marchand", "D. Roussel"};
  RandomArchive out;
  for (std::size_t i = 0; i < persons; ++i) {
    archive::Person p;
    p.id = numbered("p", i);
    p.name = kNames[g.index(4)];
    p.roles.insert(static_cast<archive::Role>(g.index(4)));
    out.persons.push_back(p);
  }
  for (std::size_t i = 0; i < documents; ++i) {
    archive::DocumentRecord d;
    d.id = numbered("d", i);
    d.kind = static_cast<archive::DocumentKind>(g.index(4));
    const std::size_t mentions = g.index(5);
    for (std::size_t k = 0; k < mentions; ++k) {
      if (g.coin(0.7) && !model.attributes.empty()) {
        d.mentions.insert(model.attributes[g.index(model.attributes.size())].id);
      } else {
        d.mentions.insert(numbered("p", g.index(persons)));
      }
    }
    if (g.coin(0.8)) {
      const int start = g.integer(1850, 2020);
      d.date = core::TimeInterval::closed(start, start + g.integer(0, 15));
    }
    const std::size_t words = g.index(4);
    for (std::size_t k = 0; k < words; ++k) d.keywords.insert(kWords[g.index(8)]);
    d.collection = "c" + std::to_string(g.index(3));
    out.documents.push_back(std::move(d));
  }
  for (std::size_t i = 0; i < documents / 4 && !model.attributes.empty(); ++i) {
    out.links.emplace_back(out.documents[g.index(documents)].id, model.attributes[g.index(model.attributes.size())].id);
  }
  return out;
}

inline archive::ArchiveStore build_store(const core::SiteModel& model, const RandomArchive& a) {
  archive::ArchiveStore s;
  s.register_attributes(model);
  for (const auto& p : a.persons) s.add_person(p);
  for (const auto& d : a.documents) s.index_document(d);
  for (const auto& [doc, attr] : a.links) s.link_to_geometry(doc, attr);
  return s;
}

inline geom::Point random_unit(Gen& g) {
  while (true) {
    geom::Point v(g.real(-1, 1), g.real(-1, 1), g.real(-1, 1));
    const double n = v.norm();
    if (n > 1e-3 && n <= 1.0) return v / n;
  }
}

inline geom::PointCloud random_cloud(Gen& g, std::size_t n, double extent, bool colored) {
  geom::PointCloud c;
  c.source_id = "random";
  for (std::size_t i = 0; i < n; ++i) {
    c.points.emplace_back(g.real(0, extent), g.real(0, extent), g.real(0, extent));
  }
  if (colored) {
    c.colors.emplace();
    for (std::size_t i = 0; i < n; ++i) c.colors->push_back({g.byte(), g.byte(), g.byte()});
  }
  return c;
}

// Points on a bumpy closed surface (a deformed ellipsoid) of size ~extent,
// so point-to-point ICP has a well-defined optimum.
inline geom::PointCloud random_surface_cloud(Gen& g, std::size_t n, double extent) {
  geom::PointCloud c;
  c.source_id = "surface";
  for (std::size_t i = 0; i < n; ++i) {
    const geom::Point u = random_unit(g);
    const double bump = 1.0 + 0.15 * std::sin(3.0 * u.x()) * std::cos(2.0 * u.y()) + 0.1 * std::sin(5.0 * u.z());
    c.points.emplace_back(0.5 * extent * bump * u.x(), 0.35 * extent * bump * u.y(), 0.25 * extent * bump * u.z());
  }
  return c;
}

inline geom::RigidTransform random_rigid(Gen& g, double max_angle_rad, double max_translation) {
  geom::RigidTransform t;
  t.rotation = geom::axis_angle(random_unit(g), g.real(0.0, max_angle_rad));
  t.translation = random_unit(g) * g.real(0.0, max_translation);
  return t;
}

}  // namespace testsupport
