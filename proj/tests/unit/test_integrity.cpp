#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "chronosite/errors.hpp"
#include "chronosite/integrity/integrity.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace chronosite;
using core::TimeInterval;

namespace {

core::SiteModel model_of(std::vector<int> years, std::vector<std::pair<std::string, TimeInterval>> attrs) {
  core::SiteModel m;
  for (std::size_t i = 0; i < years.size(); ++i) m.states.push_back({"s" + std::to_string(years[i]), "", years[i], i, {}});
  for (auto& [id, t] : attrs) {
    core::Attribute a;
    a.id = id;
    a.name = id;
    a.existence = t;
    m.attributes.push_back(a);
  }
  return m;
}

archive::DocumentRecord mention(const std::string& id, std::set<std::string> mentions) {
  archive::DocumentRecord d;
  d.id = id;
  d.mentions = std::move(mentions);
  return d;
}

}  // namespace

TEST_CASE("inventory completeness") {
  const auto m = model_of({1900}, {{"A", TimeInterval::open(1880)},
                                   {"B", TimeInterval::open(1880)},
                                   {"C", TimeInterval::open(1880)},
                                   {"D", TimeInterval::open(1880)}});
  archive::ArchiveStore s;
  s.register_attributes(m);
  s.index_document(mention("d1", {"A", "B"}));
  s.index_document(mention("d2", {}));
  s.link_to_geometry("d2", "C");
  const auto c = integrity::inventory_completeness(m, s, "s1900");
  CHECK(c.fraction == 0.75);
  CHECK(c.documented == 3);
  CHECK(c.active == 4);
  CHECK_THROWS_AS(integrity::inventory_completeness(m, s, "nope"), UnknownState);

  SUBCASE("an empty state is vacuously complete") {
    const auto e = model_of({1800, 1900}, {{"A", TimeInterval::open(1880)}});
    const auto v = integrity::inventory_completeness(e, archive::ArchiveStore{}, "s1800");
    CHECK(v.vacuous);
    CHECK(v.fraction == 1.0);
  }
}

TEST_CASE("adding a document never lowers completeness") {
  testsupport::Gen g(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testsupport::random_model(g);
    auto a = testsupport::random_archive(g, m, 30);
    archive::ArchiveStore s = testsupport::build_store(m, a);
    for (int extra = 0; extra < 10; ++extra) {
      std::vector<double> before;
      for (const auto& st : m.states) before.push_back(integrity::inventory_completeness(m, s, st.id).fraction);
      s.index_document(mention("extra" + std::to_string(extra), {m.attributes[g.index(m.attributes.size())].id}));
      for (std::size_t i = 0; i < m.states.size(); ++i) {
        REQUIRE(integrity::inventory_completeness(m, s, m.states[i].id).fraction >= before[i]);
      }
    }
  }
}

TEST_CASE("survival fraction") {
  const auto m = model_of({1880, 2017}, {{"A", TimeInterval::closed(1880, 1890)}, {"B", TimeInterval::open(1880)}});
  const auto s = integrity::survival_fraction(m, "s1880");
  CHECK(s.fraction == 0.5);
  CHECK(s.surviving_ids == core::IdSet{"B"});
  CHECK(s.lost_ids == core::IdSet{"A"});
  CHECK(integrity::survival_fraction(m, "s2017").fraction == 1.0);

  SUBCASE("from the latest state is always 1") {
    testsupport::Gen g(42);
    for (int trial = 0; trial < 50; ++trial) {
      const auto r = testsupport::random_model(g);
      CHECK(integrity::survival_fraction(r, r.states.back().id).fraction == 1.0);
    }
  }
}

TEST_CASE("continuity of use") {
  const auto m = model_of({1880, 2017}, {{"A", TimeInterval::closed(1880, 1890)}, {"B", TimeInterval::open(1900)}});
  const auto c = integrity::continuity_of_use(m);
  CHECK_FALSE(c.continuous);
  REQUIRE(c.gaps.size() == 1);
  CHECK(c.gaps[0] == integrity::YearSpan{1891, 1899});

  CHECK_THROWS_AS(integrity::continuity_of_use(model_of({1880}, {})), EmptyModel);
  CHECK_THROWS_AS(integrity::continuity_of_use(model_of({}, {{"A", TimeInterval::open(1900)}})), EmptyModel);
}

TEST_CASE("metrics match brute force on random models") {
  testsupport::Gen g(43);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = testsupport::random_model(g);
    const auto a = testsupport::random_archive(g, m, 40);
    const auto s = testsupport::build_store(m, a);
    for (const auto& st : m.states) {
      REQUIRE(integrity::inventory_completeness(m, s, st.id).fraction ==
              oracle::completeness(m, a.documents, a.links, st.year));
      REQUIRE(integrity::survival_fraction(m, st.id).fraction == oracle::survival(m, st.year, m.states.back().year));
    }
    const auto c = integrity::continuity_of_use(m);
    REQUIRE(c.gaps == oracle::gaps(m));
  }
}

TEST_CASE("integrity statement") {
  testsupport::Gen g(44);
  const auto m = testsupport::random_model(g);
  const auto a = testsupport::random_archive(g, m, 40);
  const auto s = testsupport::build_store(m, a);
  const std::map<std::string, std::string> notes{{"adverse_effects", "Masts on the ridge."},
                                                 {"landscape", "Silhouette intact."},
                                                 {"condition", "Good."}};
  const auto r = integrity::integrity_statement(m, s, notes);
  CHECK(r.per_state.size() == m.states.size());
  CHECK(r.statement.adverse_effects == "Masts on the ridge.");
  CHECK(r.statement.landscape == "Silhouette intact.");
  CHECK(r.statement.condition == "Good.");
  CHECK(r.survival.reference_state_id == m.states.front().id);

  SUBCASE("deterministic") {
    const auto again = integrity::integrity_statement(m, s, notes);
    CHECK(integrity::render_text(again) == integrity::render_text(r));
  }
  SUBCASE("missing notes leave operator fields empty") {
    const auto bare = integrity::integrity_statement(m, s, {});
    CHECK(bare.statement.adverse_effects.empty());
    CHECK_FALSE(bare.statement.elements.empty());
  }
  SUBCASE("site metadata and span appear verbatim") {
    auto mm = m;
    mm.site_metadata = {{"elevation_m", "2860"}, {"first_regular_use", "1883"}};
    const auto rr = integrity::integrity_statement(mm, s, {});
    CHECK(rr.site_metadata.at("elevation_m") == "2860");
    const std::string span = std::to_string(mm.states.front().year) + " to " + std::to_string(mm.states.back().year);
    CHECK(rr.statement.elements.find(span) != std::string::npos);
    CHECK(rr.statement.elements.find("2860 m") != std::string::npos);
    CHECK(rr.statement.elements.find("First regular use: 1883") != std::string::npos);
  }
  SUBCASE("empty models produce warnings instead of failures") {
    const auto empty = model_of({1900}, {});
    const auto w = integrity::integrity_statement(empty, archive::ArchiveStore{}, {});
    CHECK_FALSE(w.warnings.empty());
  }
}
