#include "chronosite/project/api.hpp"

#include "httplib.h"

#include "chronosite/errors.hpp"

namespace chronosite::project {

namespace {

ApiResponse error(int status, const std::string& message) {
  return {status, "application/json", json{{"error", message}}.dump() + "\n"};
}

// Splits "/api/a/b" into {"api", "a", "b"}.
std::vector<std::string> segments(const std::string& path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    if (path[i] == '/') {
      ++i;
      continue;
    }
    const std::size_t j = path.find('/', i);
    out.push_back(path.substr(i, j == std::string::npos ? std::string::npos : j - i));
    if (j == std::string::npos) break;
    i = j;
  }
  return out;
}

}  // namespace

std::string attribute_documents_json(const archive::ArchiveStore& store, const core::AttributeId& attribute) {
  json body = json::array();
  for (const archive::DocumentId& id : store.evidence_for(attribute)) body.push_back(to_json(store.document(id)));
  return body.dump(2) + "\n";
}

ApiService::ApiService(Project project) : project_(std::move(project)), store_(project_.store()) {
  manifest_text_ = serialize(project_.manifest());
  integrity_text_ = report_json(project_.report({}), project_.manifest()).dump(2) + "\n";
}

ApiResponse ApiService::handle(const std::string& method, const std::string& path) const {
  if (method != "GET") return error(405, "read-only API: only GET is supported");
  const std::vector<std::string> parts = segments(path.substr(0, path.find('?')));
  if (parts.empty() || parts[0] != "api") return error(404, "not found");
  if (!project_.manifest().built) return error(409, "project is not built");

  if (parts.size() == 2 && parts[1] == "manifest") return {200, "application/json", manifest_text_};
  if (parts.size() == 2 && parts[1] == "integrity") return {200, "application/json", integrity_text_};
  if (parts.size() == 4 && parts[1] == "state" && parts[3] == "cloud") return state_cloud(parts[2]);
  if (parts.size() == 4 && parts[1] == "attribute" && parts[3] == "documents") return attribute_documents(parts[2]);
  return error(404, "not found");
}

ApiResponse ApiService::state_cloud(const std::string& id) const {
  const StateEntry* s = project_.manifest().find_state(id);
  if (s == nullptr) return error(404, "unknown state '" + id + "'");
  if (!s->chunk) return error(404, "state '" + id + "' has no cloud");
  try {
    const std::vector<std::uint8_t> bytes = project_.read_chunk(*s->chunk);
    return {200, "application/octet-stream", std::string(bytes.begin(), bytes.end())};
  } catch (const Error& e) {
    return error(500, e.what());
  }
}

ApiResponse ApiService::attribute_documents(const std::string& id) const {
  if (store_.attribute_names().count(id) == 0) return error(404, "unknown attribute '" + id + "'");
  return {200, "application/json", attribute_documents_json(store_, id)};
}

// ---------------------------------------------------------------------------

struct HttpServer::Impl {
  httplib::Server server;
  std::shared_ptr<const ApiService> service;
};

HttpServer::HttpServer(std::shared_ptr<const ApiService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  auto handler = [svc = impl_->service](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse r = svc->handle(req.method, req.path);
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  impl_->server.Get(".*", handler);
  impl_->server.Post(".*", handler);
  impl_->server.Put(".*", handler);
  impl_->server.Patch(".*", handler);
  impl_->server.Delete(".*", handler);
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    port_ = impl_->server.bind_to_any_port(host);
    return port_ > 0;
  }
  if (!impl_->server.bind_to_port(host, port)) return false;
  port_ = port;
  return true;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace chronosite::project
