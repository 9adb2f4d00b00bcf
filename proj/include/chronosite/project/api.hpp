#pragma once

#include <memory>
#include <string>

#include "chronosite/project/project.hpp"

namespace chronosite::project {

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Read-only HTTP API over an immutable project snapshot:
//
//   GET /api/manifest                  canonical manifest text
//   GET /api/state/{id}/cloud          CSPC chunk of the merged state cloud
//   GET /api/attribute/{id}/documents  linked + mentioning records, query order
//   GET /api/integrity                 integrity report
//
// 404 for unknown ids or paths, 405 for anything but GET, 409 while the
// project is not built. Bodies are deterministic for a fixed project.
class ApiService {
 public:
  explicit ApiService(Project project);

  ApiResponse handle(const std::string& method, const std::string& path) const;

 private:
  ApiResponse state_cloud(const std::string& id) const;
  ApiResponse attribute_documents(const std::string& id) const;

  Project project_;
  archive::ArchiveStore store_;
  std::string manifest_text_;
  std::string integrity_text_;
};

// JSON array body served for an attribute's documents.
std::string attribute_documents_json(const archive::ArchiveStore& store, const core::AttributeId& attribute);

// Thin cpp-httplib wrapper around an ApiService. listen() blocks until
// stop() is called from another thread.
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const ApiService> service);
  ~HttpServer();

  bool bind(const std::string& host, int port);  // port 0 picks a free port
  int port() const { return port_; }
  void listen();  // blocks
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace chronosite::project
