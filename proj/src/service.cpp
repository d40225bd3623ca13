#include "domscore/service.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "httplib.h"

namespace domscore {

using nlohmann::json;

namespace {

ServiceResponse json_response(int status, const json& body) { return {status, body.dump()}; }

ServiceResponse error_response(int status, std::string_view kind, const std::string& path,
                               const std::string& message) {
  return json_response(status, {{"error", {{"kind", kind}, {"path", path}, {"message", message}}}});
}

ServiceResponse error_response(const Error& e, const std::string& path_prefix = "") {
  const int status = e.kind() == ErrorKind::empty_reference ? 422 : 400;
  return error_response(status, to_string(e.kind()), path_prefix + e.path(), e.what());
}

json parse_body(std::string_view body) {
  json doc;
  try {
    doc = json::parse(body.begin(), body.end());
  } catch (const json::parse_error& e) {
    throw SchemaError("", std::string("invalid JSON body: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("", "request body must be a JSON object");
  return doc;
}

const json& field(const json& doc, std::string_view key) {
  auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError("/" + std::string(key), "missing field '" + std::string(key) + "'");
  return *it;
}

RewardWeights read_weights(const json& doc, const RewardWeights& defaults) {
  RewardWeights w = defaults;
  auto it = doc.find("weights");
  if (it == doc.end() || it->is_null()) return w;
  if (!it->is_object()) throw SchemaError("/weights", "expected object");
  for (auto [key, target] : {std::pair{"alpha", &w.alpha}, std::pair{"beta", &w.beta}, std::pair{"gamma", &w.gamma}}) {
    auto v = it->find(key);
    if (v == it->end()) continue;
    if (!v->is_number()) throw SchemaError(std::string("/weights/") + key, "expected number");
    *target = v->get<double>();
  }
  w.validate();
  return w;
}

bool read_verbose(const json& doc) {
  auto it = doc.find("verbose");
  if (it == doc.end()) return false;
  if (!it->is_boolean()) throw SchemaError("/verbose", "expected boolean");
  return it->get<bool>();
}

PageSnapshot parse_side(const json& doc, std::string_view key) {
  const std::string prefix = "/" + std::string(key);
  try {
    return parse_snapshot(field(doc, key));
  } catch (const SchemaError& e) {
    throw SchemaError(e.path().rfind(prefix, 0) == 0 ? e.path() : prefix + e.path(), e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(prefix + e.path(), e.what());
  }
}

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out.push_back(c);
  }
  return out + "'";
}

}  // namespace

std::string run_render_bridge(const std::string& command, const std::string& html) {
  std::string tmpl = (std::filesystem::temp_directory_path() / "domscore-render-XXXXXX.html").string();
  int fd = ::mkstemps(tmpl.data(), 5);
  if (fd < 0) throw std::runtime_error("cannot create temporary file for render bridge");
  ::close(fd);
  struct Cleanup {
    std::string path;
    ~Cleanup() { std::filesystem::remove(path); }
  } cleanup{tmpl};

  {
    std::ofstream out(tmpl, std::ios::binary);
    out << html;
    if (!out) throw std::runtime_error("cannot write temporary file for render bridge");
  }

  const std::string cmd = command + " " + shell_quote(tmpl);
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) throw std::runtime_error("cannot start render bridge");
  std::string output;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0)
    throw std::runtime_error("render bridge exited with failure");
  return output;
}

ScoringService::ScoringService(ServiceConfig config) : config_(std::move(config)) {
  config_.default_weights.validate();
}

ServiceResponse ScoringService::handle(std::string_view method, std::string_view path, std::string_view body) const {
  const bool get = method == "GET";
  const bool post = method == "POST";
  if (path == "/healthz") {
    if (!get) return error_response(405, "MethodNotAllowed", "", "use GET");
    return json_response(200, {{"status", "ok"}});
  }
  if (path == "/v1/score" || path == "/v1/batch" || path == "/v1/render-score") {
    if (!post) return error_response(405, "MethodNotAllowed", "", "use POST");
    if (path == "/v1/score") return score(body);
    if (path == "/v1/batch") return batch(body);
    return render_score(body);
  }
  return error_response(404, "NotFound", "", "no such endpoint");
}

ServiceResponse ScoringService::score(std::string_view body) const {
  try {
    const auto doc = parse_body(body);
    ScoringOptions options;
    options.weights = read_weights(doc, config_.default_weights);
    const bool verbose = read_verbose(doc);
    const auto candidate = parse_side(doc, "candidate");
    const auto reference = parse_side(doc, "reference");
    return json_response(200, to_json(score_pair(candidate, reference, options), verbose));
  } catch (const Error& e) {
    return error_response(e);
  }
}

ServiceResponse ScoringService::batch(std::string_view body) const {
  try {
    const auto doc = parse_body(body);
    ScoringOptions options;
    options.weights = read_weights(doc, config_.default_weights);
    const bool verbose = read_verbose(doc);

    const auto& items = field(doc, "pairs");
    if (!items.is_array()) throw SchemaError("/pairs", "expected array");
    std::vector<BatchPair> pairs;
    pairs.reserve(items.size());
    for (const auto& item : items) {
      BatchPair p;
      if (item.is_object()) {
        if (auto c = item.find("candidate"); c != item.end()) p.candidate = *c;
        if (auto r = item.find("reference"); r != item.end()) p.reference = *r;
      }
      pairs.push_back(std::move(p));
    }

    std::optional<std::size_t> group_size;
    if (auto g = doc.find("group_size"); g != doc.end() && !g->is_null()) {
      if (!g->is_number_integer() || g->get<long long>() < 1)
        throw SchemaError("/group_size", "expected positive integer");
      group_size = g->get<std::size_t>();
    }

    return json_response(200, to_json(score_batch(pairs, options, group_size, config_.workers), verbose));
  } catch (const Error& e) {
    return error_response(e);
  }
}

ServiceResponse ScoringService::render_score(std::string_view body) const {
  if (config_.bridge_command.empty())
    return error_response(501, "NotImplemented", "", "no render bridge configured");
  try {
    const auto doc = parse_body(body);
    ScoringOptions options;
    options.weights = read_weights(doc, config_.default_weights);
    const bool verbose = read_verbose(doc);
    const auto& html = field(doc, "candidate_html");
    if (!html.is_string()) throw SchemaError("/candidate_html", "expected string");
    const auto reference = parse_side(doc, "reference");

    std::string rendered;
    try {
      rendered = run_render_bridge(config_.bridge_command, html.get<std::string>());
    } catch (const std::runtime_error& e) {
      return error_response(502, "BridgeError", "", e.what());
    }
    PageSnapshot candidate;
    try {
      candidate = parse_snapshot(rendered);
    } catch (const Error& e) {
      return error_response(502, "BridgeError", e.path(), std::string("bridge output rejected: ") + e.what());
    }
    return json_response(200, to_json(score_pair(candidate, reference, options), verbose));
  } catch (const Error& e) {
    return error_response(e);
  }
}

struct HttpServer::Impl {
  explicit Impl(ServiceConfig cfg) : service(std::move(cfg)) {
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
      auto out = service.handle(req.method, req.path, req.body);
      res.status = out.status;
      res.set_content(out.body, "application/json");
    };
    server.Get("/healthz", route);
    server.Post("/v1/score", route);
    server.Post("/v1/batch", route);
    server.Post("/v1/render-score", route);
    server.set_payload_max_length(512ull << 20);
  }

  ScoringService service;
  httplib::Server server;
};

HttpServer::HttpServer(ServiceConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const auto& cfg = impl_->service.config();
  if (cfg.port == 0) return impl_->server.bind_to_any_port(cfg.host);
  return impl_->server.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace domscore
