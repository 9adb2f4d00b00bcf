#pragma once

// Brute-force reference implementations. They share no code with the
// library beyond the plain data types.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chronosite/archive/archive_store.hpp"
#include "chronosite/core/site_model.hpp"
#include "chronosite/geom/point_cloud.hpp"

namespace oracle {

namespace core = chronosite::core;
namespace geom = chronosite::geom;
namespace archive = chronosite::archive;

inline bool exists_in(const core::TimeInterval& t, int year) {
  if (year < t.start) return false;
  if (t.end.has_value() && year > *t.end) return false;
  return true;
}

inline std::set<std::string> state_at(const core::SiteModel& m, int year) {
  std::set<std::string> out;
  for (const auto& a : m.attributes) {
    if (exists_in(a.existence, year)) out.insert(a.id);
  }
  return out;
}

inline int year_of(const core::SiteModel& m, const std::string& state) {
  for (const auto& s : m.states) {
    if (s.id == state) return s.year;
  }
  throw std::logic_error("no state " + state);
}

struct Diff {
  std::set<std::string> added, removed, retained;
};

inline Diff diff(const core::SiteModel& m, const std::string& a, const std::string& b) {
  const auto sa = oracle::state_at(m, year_of(m, a));
  const auto sb = oracle::state_at(m, year_of(m, b));
  Diff d;
  for (const auto& x : sb) (sa.count(x) ? d.retained : d.added).insert(x);
  for (const auto& x : sa) {
    if (!sb.count(x)) d.removed.insert(x);
  }
  return d;
}

// palette[k], k = first state (by ordinal) whose year >= start, for
// attributes overlapping [first year, last year].
inline std::map<std::string, chronosite::Rgb> period_colors(const core::SiteModel& m,
                                                            const std::vector<chronosite::Rgb>& palette) {
  std::map<std::string, chronosite::Rgb> out;
  if (m.states.empty()) return out;
  const int first = m.states.front().year;
  const int last = m.states.back().year;
  for (const auto& a : m.attributes) {
    bool overlaps = false;
    for (int y = first; y <= last && !overlaps; ++y) overlaps = exists_in(a.existence, y);
    if (!overlaps) continue;
    for (const auto& s : m.states) {
      if (s.year >= a.existence.start) {
        out[a.id] = palette.at(s.ordinal);
        break;
      }
    }
  }
  return out;
}

// Documents linked to or mentioning the attribute.
inline std::set<std::string> evidence(const std::vector<archive::DocumentRecord>& docs,
                                      const std::vector<std::pair<std::string, std::string>>& links,
                                      const std::string& attribute) {
  std::set<std::string> out;
  for (const auto& d : docs) {
    if (d.mentions.count(attribute)) out.insert(d.id);
  }
  for (const auto& [doc, attr] : links) {
    if (attr == attribute) out.insert(doc);
  }
  return out;
}

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline void sort_docs(std::vector<const archive::DocumentRecord*>& v) {
  std::sort(v.begin(), v.end(), [](const archive::DocumentRecord* a, const archive::DocumentRecord* b) {
    const auto ka = std::make_tuple(a->date ? 0 : 1, a->date ? a->date->start : 0, a->id);
    const auto kb = std::make_tuple(b->date ? 0 : 1, b->date ? b->date->start : 0, b->id);
    return ka < kb;
  });
}

// Linear scan over every document, checking each filter field directly.
inline std::vector<std::string> query(const core::SiteModel& m, const std::vector<archive::Person>& persons,
                                      const std::vector<archive::DocumentRecord>& docs,
                                      const std::vector<std::pair<std::string, std::string>>& links,
                                      const archive::QueryFilter& f) {
  std::vector<const archive::DocumentRecord*> hits;
  for (const auto& d : docs) {
    if (f.kind && d.kind != *f.kind) continue;
    if (f.date_year && !(d.date && exists_in(*d.date, *f.date_year))) continue;
    if (f.keyword) {
      bool found = false;
      for (const auto& k : d.keywords) found = found || lower(k) == lower(*f.keyword);
      if (!found) continue;
    }
    if (f.building_name) {
      bool found = false;
      for (const auto& a : m.attributes) {
        if (a.name == *f.building_name && evidence(docs, links, a.id).count(d.id)) found = true;
      }
      if (!found) continue;
    }
    if (f.actor_name) {
      bool found = false;
      for (const auto& p : persons) found = found || (p.name == *f.actor_name && d.mentions.count(p.id));
      if (!found) continue;
    }
    hits.push_back(&d);
  }
  sort_docs(hits);
  std::vector<std::string> out;
  for (const auto* d : hits) out.push_back(d->id);
  return out;
}

// Quadratic pair count: for every other entity, the number of documents
// mentioning both. Ranked by (count desc, id asc), top k.
inline std::vector<std::pair<std::string, std::size_t>> suggestions(const std::vector<archive::DocumentRecord>& docs,
                                                                    const std::string& entity, std::size_t k) {
  std::set<std::string> entities;
  for (const auto& d : docs) entities.insert(d.mentions.begin(), d.mentions.end());
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& other : entities) {
    if (other == entity) continue;
    std::size_t n = 0;
    for (const auto& d : docs) n += (d.mentions.count(entity) && d.mentions.count(other)) ? 1 : 0;
    if (n > 0) out.emplace_back(other, n);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  if (out.size() > k) out.resize(k);
  return out;
}

struct VoxelAcc {
  double x = 0, y = 0, z = 0;
  unsigned r = 0, g = 0, b = 0;
  std::size_t n = 0;
};

// Voxel cells keyed by floored coordinates; distinct points accumulated in
// input order.
inline geom::PointCloud voxel_merge(const std::vector<geom::PointCloud>& clouds, double voxel) {
  std::map<std::tuple<long long, long long, long long>, VoxelAcc> cells;
  bool colored = true;
  for (const auto& c : clouds) colored = colored && c.colors.has_value();
  std::vector<std::tuple<double, double, double, int, int, int>> seen;
  for (const auto& c : clouds) {
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const auto& p = c.points[i];
      // set union: skip exact repeats (linear search)
      const auto id = colored ? std::make_tuple(p.x(), p.y(), p.z(), int((*c.colors)[i].r), int((*c.colors)[i].g),
                                                int((*c.colors)[i].b))
                              : std::make_tuple(p.x(), p.y(), p.z(), 0, 0, 0);
      if (std::find(seen.begin(), seen.end(), id) != seen.end()) continue;
      seen.push_back(id);
      auto key = std::make_tuple(static_cast<long long>(std::floor(p.x() / voxel)),
                                 static_cast<long long>(std::floor(p.y() / voxel)),
                                 static_cast<long long>(std::floor(p.z() / voxel)));
      VoxelAcc& a = cells[key];
      a.x += p.x();
      a.y += p.y();
      a.z += p.z();
      if (colored) {
        a.r += (*c.colors)[i].r;
        a.g += (*c.colors)[i].g;
        a.b += (*c.colors)[i].b;
      }
      ++a.n;
    }
  }
  geom::PointCloud out;
  if (colored) out.colors.emplace();
  auto half_up = [](unsigned sum, std::size_t n) {
    // floor(sum / n + 1/2) in exact integer arithmetic
    return static_cast<std::uint8_t>((2 * sum + n) / (2 * n));
  };
  for (const auto& [key, a] : cells) {
    const double n = static_cast<double>(a.n);
    out.points.emplace_back(a.x / n, a.y / n, a.z / n);
    if (colored) out.colors->push_back({half_up(a.r, a.n), half_up(a.g, a.n), half_up(a.b, a.n)});
  }
  return out;
}

struct Nearest {
  std::size_t index = 0;
  double distance = std::numeric_limits<double>::infinity();
};

inline Nearest nearest(const std::vector<geom::Point>& target, const geom::Point& q) {
  Nearest best;
  for (std::size_t i = 0; i < target.size(); ++i) {
    const double d = (target[i] - q).norm();
    if (d < best.distance) best = {i, d};
  }
  return best;
}

inline double completeness(const core::SiteModel& m, const std::vector<archive::DocumentRecord>& docs,
                           const std::vector<std::pair<std::string, std::string>>& links, int year) {
  std::size_t active = 0, documented = 0;
  for (const auto& a : m.attributes) {
    if (!exists_in(a.existence, year)) continue;
    ++active;
    if (!evidence(docs, links, a.id).empty()) ++documented;
  }
  return active == 0 ? 1.0 : static_cast<double>(documented) / static_cast<double>(active);
}

inline double survival(const core::SiteModel& m, int from_year, int latest_year) {
  std::size_t then = 0, kept = 0;
  for (const auto& a : m.attributes) {
    if (!exists_in(a.existence, from_year)) continue;
    ++then;
    if (exists_in(a.existence, latest_year)) ++kept;
  }
  return then == 0 ? 1.0 : static_cast<double>(kept) / static_cast<double>(then);
}

// Year-by-year scan for runs of years without any existing attribute.
inline std::vector<std::pair<int, int>> gaps(const core::SiteModel& m) {
  std::vector<std::pair<int, int>> out;
  const int first = m.states.front().year;
  const int last = m.states.back().year;
  std::optional<int> open_gap;
  for (int y = first; y <= last; ++y) {
    bool used = false;
    for (const auto& a : m.attributes) used = used || exists_in(a.existence, y);
    if (!used && !open_gap) open_gap = y;
    if (used && open_gap) {
      out.emplace_back(*open_gap, y - 1);
      open_gap.reset();
    }
  }
  if (open_gap) out.emplace_back(*open_gap, last);
  return out;
}

}  // namespace oracle
