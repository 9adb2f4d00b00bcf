#pragma once

#include "chronosite/project/manifest.hpp"
#include "generators.hpp"

namespace testsupport {

namespace project = chronosite::project;

inline std::string random_text(Gen& g) {
  static const char* const kPieces[] = {"dome", " ", "Pic", "é", "\"quoted\"", "line\nbreak", "tab\t", "1:500", "/", "\\"};
  std::string s;
  const std::size_t n = g.index(5);
  for (std::size_t i = 0; i < n; ++i) s += kPieces[g.index(10)];
  return s;
}

// Wide-range doubles, including values with no short decimal form.
inline double random_double(Gen& g) {
  switch (g.index(4)) {
    case 0:
      return g.real(-1.0, 1.0);
    case 1:
      return g.real(-1e6, 1e6);
    case 2:
      return std::ldexp(g.real(0.5, 1.0), g.integer(-60, 60));
    default:
      return static_cast<double>(g.integer(-1000, 1000));
  }
}

inline project::ProjectManifest random_manifest(Gen& g) {
  project::ProjectManifest m;
  const std::size_t meta = g.index(4);
  for (std::size_t i = 0; i < meta; ++i) m.site_metadata["key" + std::to_string(i)] = random_text(g);

  const core::SiteModel model = random_model(g, 1 + g.index(12), 1 + g.index(7));
  for (const auto& s : model.states) {
    project::StateEntry e;
    e.state = s;
    e.state.label = random_text(g);
    if (g.coin(0.3)) e.anchor = "c" + std::to_string(g.index(9));
    if (g.coin()) {
      e.chunk = project::ChunkRef{"chunks/state-" + s.id + ".cspc", static_cast<std::uint64_t>(g.integer(0, 1 << 30)),
                                  static_cast<std::uint32_t>(g.engine()())};
      e.state.cloud_id = "merged/" + s.id;
      const std::size_t regs = 1 + g.index(3);
      for (std::size_t r = 0; r < regs; ++r) {
        project::RegistrationRecord rec;
        rec.cloud_id = "c" + std::to_string(r);
        rec.anchor = r == 0;
        rec.transform = random_rigid(g, 3.0, 100.0);
        rec.transform.translation.x() = random_double(g);
        if (g.coin(0.2)) rec.transform.scale = g.real(0.5, 2.0);
        rec.rms_residual = std::abs(random_double(g));
        rec.max_residual = std::abs(random_double(g));
        rec.inlier_fraction = g.real(0, 1);
        rec.iterations = g.index(60);
        rec.converged = g.coin();
        e.registrations.push_back(rec);
      }
      e.residual = project::ResidualSummary{g.real(0, 1), g.real(0, 5), g.real(0, 1), g.coin(), regs};
    }
    m.states.push_back(e);
  }
  const std::size_t clouds = g.index(5);
  for (std::size_t i = 0; i < clouds; ++i) {
    project::CloudEntry c;
    c.id = "c" + std::to_string(i);
    c.state_id = m.states[g.index(m.states.size())].state.id;
    c.kind = static_cast<geom::SourceKind>(g.index(4));
    c.source_id = random_text(g);
    c.unit_scale = g.coin() ? 1.0 : random_double(g) + 1001.0;
    c.chunk = {"chunks/cloud-" + c.id + ".cspc", static_cast<std::uint64_t>(g.index(100000)),
               static_cast<std::uint32_t>(g.engine()())};
    m.clouds.push_back(c);
  }
  for (core::Attribute a : model.attributes) {
    a.name = random_text(g) + "x";
    if (g.coin(0.3)) a.metadata["purpose"] = random_text(g);
    if (g.coin(0.3)) {
      a.geometry = core::GeometrySegment{"c0", core::IndexRange{g.index(10), 10 + g.index(10)}};
    } else if (g.coin(0.3)) {
      core::BoundingBox b;
      for (int k = 0; k < 3; ++k) {
        b.min[k] = random_double(g);
        b.max[k] = b.min[k] + std::abs(random_double(g));
      }
      a.geometry = core::GeometrySegment{"merged/s000", b};
    }
    m.attributes.push_back(a);
  }
  const auto arch = random_archive(g, model, g.index(15), 1 + g.index(4));
  m.persons = arch.persons;
  for (auto d : arch.documents) {
    // stored keywords are lowercase
    std::set<std::string> lowered;
    for (const auto& k : d.keywords) lowered.insert(chronosite::archive::to_lower(k));
    d.keywords = lowered;
    d.uri = random_text(g);
    if (g.coin(0.2)) d.viewpoint = "summit";
    m.documents.push_back(d);
  }
  m.links = arch.links;
  std::sort(m.links.begin(), m.links.end());
  m.links.erase(std::unique(m.links.begin(), m.links.end()), m.links.end());
  const std::size_t colors = g.index(12);
  for (std::size_t i = 0; i < colors; ++i) m.palette.push_back({g.byte(), g.byte(), g.byte()});
  m.build.voxel_size = std::abs(random_double(g)) + 1e-3;
  m.build.max_iterations = g.index(200);
  m.build.convergence_tol_m = std::ldexp(1.0, -g.integer(5, 40));
  m.build.trim_fraction = g.real(0, 0.5);
  m.build.estimate_scale = g.coin();
  m.built = g.coin();
  for (const auto& a : m.attributes) {
    if (g.coin()) m.period_colors[a.id] = {g.byte(), g.byte(), g.byte()};
  }
  return m;
}

}  // namespace testsupport
