#pragma once

// HTTP reward service. Handlers are plain functions of (method, path, body)
// so they can be exercised without a socket; HttpServer binds them to
// cpp-httplib.

#include <memory>
#include <string>
#include <string_view>

#include "domscore/scoring.hpp"

namespace domscore {

struct ServiceConfig {
  std::string host = "0.0.0.0";
  int port = 8080;
  unsigned workers = 8;  // batch evaluation threads per request
  RewardWeights default_weights;
  /// Command that renders an HTML file to snapshot JSON on stdout. The
  /// path of a temporary .html file is appended as the last argument.
  /// Empty disables /v1/render-score.
  std::string bridge_command;
};

struct ServiceResponse {
  int status = 200;
  std::string body;  // JSON
};

class ScoringService {
 public:
  explicit ScoringService(ServiceConfig config);

  ServiceResponse handle(std::string_view method, std::string_view path, std::string_view body) const;

  const ServiceConfig& config() const { return config_; }

 private:
  ServiceResponse score(std::string_view body) const;
  ServiceResponse batch(std::string_view body) const;
  ServiceResponse render_score(std::string_view body) const;

  ServiceConfig config_;
};

/// Runs the bridge command on `html` and returns its stdout. Throws
/// std::runtime_error when the command fails.
std::string run_render_bridge(const std::string& command, const std::string& html);

class HttpServer {
 public:
  explicit HttpServer(ServiceConfig config);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free port) and returns the bound port,
  /// or -1 on failure.
  int bind();
  /// Serves until stop(); call after bind().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace domscore
