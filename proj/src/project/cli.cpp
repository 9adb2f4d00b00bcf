#include "chronosite/project/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "chronosite/errors.hpp"
#include "chronosite/project/api.hpp"
#include "chronosite/project/demo.hpp"
#include "chronosite/project/project.hpp"

namespace chronosite::project {

namespace {

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_file(const fs::path& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what(), 0);
  }
}

int finish(const std::vector<std::string>& warnings, std::ostream& err) {
  for (const std::string& w : warnings) err << "warning: " << w << "\n";
  return warnings.empty() ? kExitOk : kExitWarnings;
}

Project open_built(const std::optional<std::string>& dir) {
  Project p = Project::open(resolve_project_dir(dir));
  if (!p.manifest().built) throw InvalidProject("project is not built; run 'build' first");
  return p;
}

struct Options {
  std::optional<std::string> project;

  std::string site;

  std::optional<std::string> cloud;
  std::optional<std::string> records;
  std::string state;
  std::string kind = "manual_scan";
  double scale = 1.0;
  std::optional<std::string> cloud_id;

  std::optional<double> voxel;
  std::optional<std::size_t> icp_iters;
  std::optional<double> trim;
  std::vector<std::string> anchors;

  std::optional<int> year;
  std::vector<std::string> diff;
  bool doc_filter = false;
  std::optional<std::string> building;
  std::optional<int> doc_year;
  std::optional<std::string> actor;
  std::optional<std::string> keyword;
  std::optional<std::string> doc_kind;
  std::optional<std::string> attribute_docs;
  std::optional<std::string> suggest;
  std::size_t k = 10;
  std::optional<std::string> infer;

  std::optional<std::string> notes;
  std::string format = "json";
  std::optional<std::string> out_file;

  std::string host = "127.0.0.1";
  int port = 8080;

  std::string demo_out;
};

int cmd_init(const Options& o, std::ostream& out) {
  const Project p = Project::create(resolve_project_dir(o.project), manifest_from_json(parse_json_file(o.site)));
  out << json{{"project", p.dir().string()},
              {"states", p.manifest().states.size()},
              {"attributes", p.manifest().attributes.size()}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_ingest(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.cloud.has_value() == o.records.has_value()) throw Error("ingest needs exactly one of --cloud or --records");
  Project p = Project::open(resolve_project_dir(o.project));
  std::vector<std::string> warnings;
  if (o.cloud) {
    if (o.state.empty()) throw Error("--cloud requires --state");
    const CloudIngest r = p.ingest_cloud(*o.cloud, o.state, geom::source_kind_from_string(o.kind), o.scale, o.cloud_id);
    if (r.duplicate) {
      warnings.push_back("'" + *o.cloud + "' is identical to cloud '" + r.cloud_id + "' of state '" + o.state +
                         "'; nothing ingested");
    } else {
      p.save();
    }
    out << json{{"cloud", r.cloud_id}, {"state", o.state}, {"points", r.points}, {"duplicate", r.duplicate}}.dump()
        << "\n";
  } else {
    const RecordIngest r = p.ingest_records(*o.records);
    p.save();
    warnings = r.warnings;
    out << json{{"documents", r.documents}, {"persons", r.persons}, {"links", r.links}}.dump() << "\n";
  }
  return finish(warnings, err);
}

int cmd_build(const Options& o, std::ostream& out, std::ostream& err) {
  Project p = Project::open(resolve_project_dir(o.project));
  BuildOptions opts;
  opts.voxel_size = o.voxel;
  opts.max_iterations = o.icp_iters;
  opts.trim_fraction = o.trim;
  for (const std::string& a : o.anchors) {
    const std::size_t eq = a.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == a.size()) throw Error("--anchor expects STATE=CLOUD, got '" + a + "'");
    opts.anchors[a.substr(0, eq)] = a.substr(eq + 1);
  }
  const BuildOutcome r = p.build(opts);
  for (const StateEntry& s : p.manifest().states) {
    if (!s.chunk) continue;
    json row{{"state", s.state.id}, {"points", s.chunk->points}, {"chunk", s.chunk->file}};
    if (s.residual) {
      row["clouds"] = s.residual->clouds;
      row["rms_m"] = s.residual->rms;
      row["max_m"] = s.residual->max;
      row["converged"] = s.residual->converged;
    }
    out << row.dump() << "\n";
  }
  return finish(r.warnings, err);
}

json state_line(const core::Attribute& a, const ProjectManifest& m) {
  json j{{"attribute", a.id}, {"name", a.name}, {"kind", core::to_string(a.kind)}, {"existence", to_json(a.existence)}};
  const auto c = m.period_colors.find(a.id);
  if (c != m.period_colors.end()) j["color"] = {c->second.r, c->second.g, c->second.b};
  return j;
}

int cmd_query(const Options& o, std::ostream& out) {
  const int modes = int(o.year.has_value()) + int(!o.diff.empty()) + int(o.doc_filter) +
                    int(o.attribute_docs.has_value()) + int(o.suggest.has_value()) + int(o.infer.has_value());
  if (modes != 1) {
    throw Error("query needs exactly one of --year, --diff, --doc-filter, --attribute-docs, --suggest, --infer-date");
  }
  const Project p = open_built(o.project);
  const core::SiteModel model = p.model();

  if (o.year) {
    for (const core::AttributeId& id : core::state_at(model, *o.year)) {
      out << state_line(*model.find_attribute(id), p.manifest()).dump() << "\n";
    }
    return kExitOk;
  }
  if (!o.diff.empty()) {
    const core::StateDiff d = core::diff_states(model, o.diff[0], o.diff[1]);
    out << json{{"from", o.diff[0]}, {"to", o.diff[1]}, {"added", d.added}, {"removed", d.removed}, {"retained", d.retained}}
               .dump()
        << "\n";
    return kExitOk;
  }

  const archive::ArchiveStore store = p.store();
  if (o.doc_filter) {
    archive::QueryFilter f;
    f.building_name = o.building;
    f.date_year = o.doc_year;
    f.actor_name = o.actor;
    f.keyword = o.keyword;
    if (o.doc_kind) f.kind = archive::document_kind_from_string(*o.doc_kind);
    for (const archive::DocumentId& id : store.query(f)) out << to_json(store.document(id)).dump() << "\n";
    return kExitOk;
  }
  if (o.attribute_docs) {
    if (store.attribute_names().count(*o.attribute_docs) == 0) {
      throw UnknownEntity("unknown attribute '" + *o.attribute_docs + "'");
    }
    for (const archive::DocumentId& id : store.evidence_for(*o.attribute_docs)) {
      out << to_json(store.document(id)).dump() << "\n";
    }
    return kExitOk;
  }
  if (o.suggest) {
    for (const archive::Suggestion& s : store.suggest_associations(*o.suggest, o.k)) {
      out << json{{"entity", s.entity}, {"score", s.score}}.dump() << "\n";
    }
    return kExitOk;
  }
  const std::optional<core::TimeInterval> date = archive::infer_date(store, model, *o.infer);
  out << json{{"document", *o.infer},
              {"status", date ? "resolved" : "unresolved"},
              {"date", date ? to_json(*date) : json(nullptr)}}
             .dump()
      << "\n";
  return kExitOk;
}

int cmd_report(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.format != "json" && o.format != "text") throw Error("--format must be 'json' or 'text'");
  const Project p = open_built(o.project);
  std::map<std::string, std::string> notes;
  if (o.notes) {
    const json j = parse_json_file(*o.notes);
    if (!j.is_object()) throw ParseError("'" + *o.notes + "': notes must be a JSON object of strings", 0);
    for (const auto& [key, value] : j.items()) {
      if (!value.is_string()) throw ParseError("'" + *o.notes + "': note '" + key + "' is not a string", 0);
      notes[key] = value.get<std::string>();
    }
  }
  const integrity::IntegrityReport report = p.report(notes);
  const std::string text =
      o.format == "json" ? report_json(report, p.manifest()).dump(2) + "\n" : integrity::render_text(report);
  if (o.out_file) {
    std::ofstream f(*o.out_file, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + *o.out_file + "'");
    f << text;
  } else {
    out << text;
  }
  return finish(report.warnings, err);
}

int cmd_serve(const Options& o, std::ostream& out) {
  auto service = std::make_shared<const ApiService>(open_built(o.project));
  HttpServer server(service);
  if (!server.bind(o.host, o.port)) throw Error("cannot bind " + o.host + ":" + std::to_string(o.port));
  out << json{{"listening", o.host + ":" + std::to_string(server.port())}}.dump() << std::endl;
  server.listen();
  return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
  const Project p = Project::open(resolve_project_dir(o.project));
  std::vector<json> problems;
  std::vector<core::Violation> violations = core::validate_timeline(p.model());
  for (const core::Violation& v : violations) {
    const bool pending = !p.manifest().built && v.detail.find("merged/") != std::string::npos;
    if (!pending) problems.push_back({{"subject", v.subject}, {"rule", core::to_string(v.rule)}, {"detail", v.detail}});
  }
  auto check = [&](const std::string& subject, const ChunkRef& ref) {
    try {
      p.read_chunk(ref);
    } catch (const Error& e) {
      problems.push_back({{"subject", subject}, {"rule", "chunk"}, {"detail", e.what()}});
    }
  };
  for (const CloudEntry& c : p.manifest().clouds) check(c.id, c.chunk);
  for (const StateEntry& s : p.manifest().states) {
    if (s.chunk) check(s.state.id, *s.chunk);
  }
  for (const json& j : problems) out << j.dump() << "\n";
  return problems.empty() ? kExitOk : kExitError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"chronosite: chronological 3D model of a heritage site with its archive"};
  app.require_subcommand(1);
  app.add_option("--project", o.project, "Project directory (default: $CHRONOSITE_PROJECT, else .)");

  auto* init = app.add_subcommand("init", "Create a project from a site description (JSON)");
  init->add_option("--site", o.site, "Site description file")->required();

  auto* ingest = app.add_subcommand("ingest", "Add a point cloud or a record file to the project");
  ingest->add_option("--cloud", o.cloud, "XYZ or ASCII PLY file");
  ingest->add_option("--records", o.records, "Line-delimited JSON records");
  ingest->add_option("--state", o.state, "Reference state id");
  ingest->add_option("--kind", o.kind, "scale_model_scan | aerial | photogrammetry | manual_scan");
  ingest->add_option("--scale", o.scale, "Unit scale applied to coordinates");
  ingest->add_option("--id", o.cloud_id, "Cloud id (default: file stem)");

  auto* build = app.add_subcommand("build", "Register, merge and persist every reference state");
  build->add_option("--voxel", o.voxel, "Merge voxel size in meters");
  build->add_option("--icp-iters", o.icp_iters, "Maximum ICP iterations");
  build->add_option("--trim", o.trim, "ICP trim fraction");
  build->add_option("--anchor", o.anchors, "Registration target override, STATE=CLOUD");

  auto* query = app.add_subcommand("query", "Query the built model and archive");
  query->add_option("--year", o.year, "Attributes existing in the year");
  query->add_option("--diff", o.diff, "Difference between two states")->expected(2);
  query->add_flag("--doc-filter", o.doc_filter, "Conjunctive document query");
  query->add_option("--building", o.building, "Document filter: building name");
  query->add_option("--doc-year", o.doc_year, "Document filter: year covered by the date");
  query->add_option("--actor", o.actor, "Document filter: person name");
  query->add_option("--keyword", o.keyword, "Document filter: keyword");
  query->add_option("--kind", o.doc_kind, "Document filter: photo | text | plan | publication");
  query->add_option("--attribute-docs", o.attribute_docs, "Linked and mentioning documents of an attribute");
  query->add_option("--suggest", o.suggest, "Entities co-mentioned with an entity");
  query->add_option("--k", o.k, "Number of suggestions");
  query->add_option("--infer-date", o.infer, "Date suggestion for an undated document");

  auto* report = app.add_subcommand("report", "Integrity statement");
  report->add_option("--notes", o.notes, "Operator notes (JSON object)");
  report->add_option("--format", o.format, "json | text");
  report->add_option("--out", o.out_file, "Write to a file instead of stdout");

  auto* serve = app.add_subcommand("serve", "Read-only HTTP API for the viewer");
  serve->add_option("--port", o.port, "Port (0 picks a free one)");
  serve->add_option("--host", o.host, "Bind address");

  auto* validate = app.add_subcommand("validate", "Check the timeline and every chunk reference");

  auto* demo = app.add_subcommand("demo-data", "Write the demo input files");
  demo->add_option("--out", o.demo_out, "Output directory")->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*init) return cmd_init(o, out);
    if (*ingest) return cmd_ingest(o, out, err);
    if (*build) return cmd_build(o, out, err);
    if (*query) return cmd_query(o, out);
    if (*report) return cmd_report(o, out, err);
    if (*serve) return cmd_serve(o, out);
    if (*validate) return cmd_validate(o, out);
    if (*demo) {
      write_demo_inputs(o.demo_out);
      for (const auto& cmd : demo_pipeline(o.demo_out, "PROJECT")) {
        std::string line = "chronosite";
        for (const std::string& a : cmd) line += " " + a;
        err << line << "\n";
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace chronosite::project
