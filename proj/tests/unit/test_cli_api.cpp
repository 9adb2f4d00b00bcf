#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <thread>

#include "chronosite/geom/cloud_io.hpp"
#include "chronosite/project/api.hpp"
#include "chronosite/project/chunk.hpp"
#include "demo_project.hpp"
#include "generators.hpp"
#include "oracles.hpp"

// after Eigen: httplib pulls in system headers that define conflicting macros
#include "httplib.h"
#include "json.hpp"

using namespace chronosite;
using namespace chronosite::project;
using nlohmann::json;
using testsupport::cli;
using testsupport::lines;

namespace {

struct Demo {
  testsupport::TempDir dir;
  std::string project() const { return (dir / "project").string(); }
  Demo() { testsupport::build_demo(dir / "data", dir / "project"); }
};

const Demo& demo() {
  static const Demo d;
  return d;
}

// One attribute "A" existing from 1880, one small cloud in state s1900, built.
std::string single_attribute_project(const testsupport::TempDir& dir, std::vector<int> years = {1900}) {
  ProjectManifest m;
  for (int y : years) {
    StateEntry s;
    s.state.id = "s" + std::to_string(y);
    s.state.year = y;
    m.states.push_back(s);
  }
  core::Attribute a;
  a.id = "A";
  a.name = "Observatory";
  a.existence = core::TimeInterval::open(1880);
  m.attributes.push_back(a);
  Project::create(dir / "single", m);
  testsupport::Gen g(61);
  std::ofstream out(dir / "scan.xyz");
  geom::write_xyz(out, testsupport::random_surface_cloud(g, 500, 5.0));
  out.close();
  const std::string p = (dir / "single").string();
  REQUIRE(cli({"ingest", "--project", p, "--cloud", (dir / "scan.xyz").string(), "--state", "s1900"}).code == 0);
  REQUIRE(cli({"build", "--project", p}).code != kExitError);  // states without clouds only warn
  return p;
}

std::string get(const ApiService& api, const std::string& path) { return api.handle("GET", path).body; }

}  // namespace

TEST_CASE("the demo builds six state chunks with residual rows") {
  const Project p = Project::open(demo().project());
  REQUIRE(p.manifest().states.size() == 6);
  for (const StateEntry& s : p.manifest().states) {
    REQUIRE(s.chunk.has_value());
    CHECK(p.load_chunk(*s.chunk).size() == s.chunk->points);
    REQUIRE(s.residual.has_value());
    CHECK(s.residual->clouds == 2);
    CHECK(s.residual->converged);
  }
}

TEST_CASE("query --year on a single-attribute model prints one line") {
  testsupport::TempDir dir;
  const std::string p = single_attribute_project(dir);
  const auto r = cli({"query", "--project", p, "--year", "1885"});
  CHECK(r.code == kExitOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 1);
  CHECK(json::parse(ls[0]).at("attribute") == "A");
  CHECK(lines(cli({"query", "--project", p, "--year", "1870"}).out).empty());
}

TEST_CASE("query --diff between states with identical attribute sets is empty") {
  testsupport::TempDir dir;
  const std::string p = single_attribute_project(dir, {1900, 1950});
  const auto r = cli({"query", "--project", p, "--diff", "s1900", "s1950"});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j.at("added") == json::array());
  CHECK(j.at("removed") == json::array());
  CHECK(j.at("retained") == json{"A"});
  CHECK(cli({"query", "--project", p, "--diff", "s1950", "s1900"}).code == kExitError);
}

TEST_CASE("query --year and --diff agree with brute force on the demo") {
  const Project p = Project::open(demo().project());
  const core::SiteModel& m = p.model();
  for (int year = 1860; year <= 2030; year += 7) {
    std::set<std::string> got;
    for (const auto& l : lines(cli({"query", "--project", demo().project(), "--year", std::to_string(year)}).out)) {
      got.insert(json::parse(l).at("attribute").get<std::string>());
    }
    REQUIRE(got == oracle::state_at(m, year));
  }
  for (const auto& a : m.states) {
    for (const auto& b : m.states) {
      if (a.ordinal >= b.ordinal) continue;
      const json j = json::parse(cli({"query", "--project", demo().project(), "--diff", a.id, b.id}).out);
      const auto want = oracle::diff(m, a.id, b.id);
      REQUIRE(j.at("added").get<std::set<std::string>>() == want.added);
      REQUIRE(j.at("removed").get<std::set<std::string>>() == want.removed);
    }
  }
}

TEST_CASE("random --doc-filter queries match a linear scan") {
  const Project p = Project::open(demo().project());
  const ProjectManifest& m = p.manifest();
  std::vector<std::string> actors;
  for (const auto& person : m.persons) actors.push_back(person.name);
  actors.push_back("Nobody");
  std::set<std::string> words{"absent"};
  for (const auto& d : m.documents) words.insert(d.keywords.begin(), d.keywords.end());
  const std::vector<std::string> keywords(words.begin(), words.end());
  static const char* const kKinds[] = {"photo", "text", "plan", "publication"};

  testsupport::Gen g(62);
  for (int q = 0; q < 50; ++q) {
    archive::QueryFilter f;
    std::vector<std::string> args{"query", "--project", demo().project(), "--doc-filter"};
    while (f.empty()) {
      if (g.coin(0.35)) {
        f.building_name = m.attributes[g.index(m.attributes.size())].name;
        args.insert(args.end(), {"--building", *f.building_name});
      }
      if (g.coin(0.35)) {
        f.date_year = g.integer(1860, 2025);
        args.insert(args.end(), {"--doc-year", std::to_string(*f.date_year)});
      }
      if (g.coin(0.35)) {
        f.actor_name = actors[g.index(actors.size())];
        args.insert(args.end(), {"--actor", *f.actor_name});
      }
      if (g.coin(0.35)) {
        f.keyword = keywords[g.index(keywords.size())];
        args.insert(args.end(), {"--keyword", *f.keyword});
      }
      if (g.coin(0.25)) {
        const std::size_t k = g.index(4);
        f.kind = static_cast<archive::DocumentKind>(k);
        args.insert(args.end(), {"--kind", kKinds[k]});
      }
    }
    const auto r = cli(args);
    REQUIRE(r.code == kExitOk);
    std::vector<std::string> got;
    for (const auto& l : lines(r.out)) got.push_back(json::parse(l).at("id").get<std::string>());
    REQUIRE(got == oracle::query(p.model(), m.persons, m.documents, m.links, f));
  }
}

TEST_CASE("exit codes") {
  testsupport::TempDir dir;
  CHECK(cli({}).code == kExitError);
  CHECK(cli({"frobnicate"}).code == kExitError);
  CHECK(cli({"--help"}).code == kExitOk);
  CHECK(cli({"query", "--project", (dir / "none").string(), "--year", "1900"}).code == kExitError);
  CHECK(cli({"query", "--project", demo().project(), "--diff", "s1873", "nope"}).code == kExitError);
  CHECK(cli({"query", "--project", demo().project(), "--doc-filter"}).code == kExitError);
  CHECK(cli({"validate", "--project", demo().project()}).code == kExitOk);

  SUBCASE("duplicate ingest warns") {
    const std::string p = single_attribute_project(dir);
    const auto r = cli({"ingest", "--project", p, "--cloud", (dir / "scan.xyz").string(), "--state", "s1900"});
    CHECK(r.code == kExitWarnings);
    CHECK(json::parse(r.out).at("duplicate") == true);
    CHECK_FALSE(r.err.empty());
    CHECK(cli({"query", "--project", p, "--year", "1900"}).code == kExitOk);  // nothing changed
  }
  SUBCASE("malformed input names the line") {
    std::ofstream(dir / "bad.xyz") << "1 2 3\n4 5\n";
    const std::string p = single_attribute_project(dir);
    const auto r = cli({"ingest", "--project", p, "--cloud", (dir / "bad.xyz").string(), "--state", "s1900"});
    CHECK(r.code == kExitError);
    CHECK(r.err.find("line 2") != std::string::npos);
  }
}

TEST_CASE("project directory from the environment") {
  ::setenv("CHRONOSITE_PROJECT", demo().project().c_str(), 1);
  const auto r = cli({"query", "--year", "1990"});
  ::unsetenv("CHRONOSITE_PROJECT");
  CHECK(r.code == kExitOk);
  CHECK(r.out == cli({"query", "--project", demo().project(), "--year", "1990"}).out);
}

TEST_CASE("report") {
  const auto r = cli({"report", "--project", demo().project()});
  REQUIRE(r.code == kExitOk);
  const json j = json::parse(r.out);
  CHECK(j.at("per_state").size() == 6);
  const auto t = cli({"report", "--project", demo().project(), "--format", "text"});
  CHECK(t.code == kExitOk);
  CHECK(t.out.find("2860") != std::string::npos);
  CHECK(cli({"report", "--project", demo().project(), "--format", "yaml"}).code == kExitError);
}

TEST_CASE("api service") {
  const ApiService api(Project::open(demo().project()));

  const json manifest = json::parse(get(api, "/api/manifest"));
  CHECK(manifest.at("version") == kManifestVersion);
  CHECK(manifest.at("states").size() == 6);

  CHECK(api.handle("GET", "/api/state/unknown/cloud").status == 404);
  CHECK(api.handle("GET", "/api/attribute/unknown/documents").status == 404);
  CHECK(api.handle("GET", "/api/nothing").status == 404);
  CHECK(api.handle("POST", "/api/manifest").status == 405);
  CHECK(api.handle("GET", "/api/integrity").status == 200);

  const ApiResponse cloud = api.handle("GET", "/api/state/s1946/cloud");
  REQUIRE(cloud.status == 200);
  CHECK(cloud.content_type == "application/octet-stream");
  const Project p = Project::open(demo().project());
  const auto bytes = p.read_chunk(*p.manifest().find_state("s1946")->chunk);
  CHECK(cloud.body == std::string(bytes.begin(), bytes.end()));
  CHECK(decode_chunk(bytes).size() > 0);

  for (const auto& a : p.manifest().attributes) {
    const json body = json::parse(get(api, "/api/attribute/" + a.id + "/documents"));
    json from_cli = json::array();
    for (const auto& l : lines(cli({"query", "--project", demo().project(), "--attribute-docs", a.id}).out)) {
      from_cli.push_back(json::parse(l));
    }
    REQUIRE(body == from_cli);
  }

  SUBCASE("an unbuilt project answers 409") {
    testsupport::TempDir dir;
    ProjectManifest m;
    StateEntry s;
    s.state.id = "s1";
    s.state.year = 1900;
    m.states.push_back(s);
    const ApiService bare(Project::create(dir / "p", m));
    CHECK(bare.handle("GET", "/api/manifest").status == 409);
  }
}

TEST_CASE("http responses are byte-identical across restarts") {
  const std::vector<std::string> paths{"/api/manifest", "/api/state/s1873/cloud", "/api/state/s2017/cloud",
                                       "/api/attribute/a02/documents", "/api/integrity", "/api/state/unknown/cloud"};
  auto fetch_all = [&] {
    auto service = std::make_shared<const ApiService>(Project::open(demo().project()));
    HttpServer server(service);
    REQUIRE(server.bind("127.0.0.1", 0));
    std::thread t([&] { server.listen(); });
    httplib::Client client("127.0.0.1", server.port());
    std::vector<std::pair<int, std::string>> got;
    for (const auto& path : paths) {
      auto res = client.Get(path);
      REQUIRE(res);
      got.emplace_back(res->status, res->body);
    }
    auto post = client.Post("/api/manifest", "", "text/plain");
    REQUIRE(post);
    got.emplace_back(post->status, post->body);
    server.stop();
    t.join();
    return got;
  };
  const auto first = fetch_all();
  const auto second = fetch_all();
  CHECK(first == second);
  CHECK(first[0].first == 200);
  CHECK(first[5].first == 404);
  CHECK(first[6].first == 405);
}
