#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "domscore/service.hpp"
#include "httplib.h"
#include "support/builders.hpp"

using namespace domscore;
using namespace test_support;
using nlohmann::json;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(DOMSCORE_FIXTURE_DIR) + "/" + name);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

PageSnapshot reference_page() {
  return make_page({el("h1", {100, 100, 300, 40}, "Welcome", {"title"}),
                    el("li", {100, 300, 200, 40}, "One", {"item"}), el("li", {400, 300, 200, 40}, "Two", {"item"}),
                    el("button", {1300, 700, 200, 50}, "Buy now", {"cta"})});
}

PageSnapshot candidate_page() {
  auto p = reference_page();
  p.elements[0].box.left += 30;
  p.elements[3].styles.font_size = 12;
  p.elements.pop_back();
  return p;
}

json parse(const ServiceResponse& r) { return json::parse(r.body); }

class RunningServer {
 public:
  explicit RunningServer(ServiceConfig config) : server_(std::move(config)) {
    port_ = server_.bind();
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen(); });
  }
  ~RunningServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", port_);
    c.set_read_timeout(30, 0);
    return c;
  }

 private:
  HttpServer server_;
  int port_ = -1;
  std::thread thread_;
};

ServiceConfig local_config() {
  ServiceConfig c;
  c.host = "127.0.0.1";
  c.port = 0;
  c.workers = 4;
  return c;
}

}  // namespace

TEST_CASE("health check") {
  ScoringService service(local_config());
  const auto r = service.handle("GET", "/healthz", "");
  CHECK(r.status == 200);
  CHECK(parse(r) == json{{"status", "ok"}});
  CHECK(service.handle("POST", "/healthz", "").status == 405);
  CHECK(service.handle("GET", "/v1/score", "").status == 405);
  CHECK(service.handle("GET", "/nope", "").status == 404);
}

TEST_CASE("/v1/score") {
  ScoringService service(local_config());
  const auto cand = candidate_page();
  const auto ref = reference_page();

  SUBCASE("matches in-process scoring") {
    const json body = {{"candidate", to_json(cand)}, {"reference", to_json(ref)}};
    const auto r = service.handle("POST", "/v1/score", body.dump());
    REQUIRE(r.status == 200);
    CHECK(parse(r) == to_json(score_pair(cand, ref)));
  }
  SUBCASE("custom weights and verbose diagnostics") {
    const json body = {{"candidate", to_json(cand)},
                       {"reference", to_json(ref)},
                       {"weights", {{"alpha", 1}, {"beta", 0}, {"gamma", 0}}},
                       {"verbose", true}};
    const auto j = parse(service.handle("POST", "/v1/score", body.dump()));
    CHECK(j["reward"].get<double>() == doctest::Approx(j["rda"].get<double>() / 100.0).epsilon(1e-15));
    CHECK(j["diagnostics"].contains("pairs"));
  }
  SUBCASE("malformed snapshot names the JSON path") {
    auto bad = to_json(cand);
    bad["elements"][1]["box"].erase("height");
    const json body = {{"candidate", bad}, {"reference", to_json(ref)}};
    const auto r = service.handle("POST", "/v1/score", body.dump());
    CHECK(r.status == 400);
    const auto err = parse(r)["error"];
    CHECK(err["kind"] == "SchemaError");
    CHECK(err["path"] == "/candidate/elements/1/box/height");
  }
  SUBCASE("invalid geometry") {
    auto bad = to_json(ref);
    bad["elements"][2]["box"]["width"] = -1;
    const json body = {{"candidate", to_json(cand)}, {"reference", bad}};
    const auto r = service.handle("POST", "/v1/score", body.dump());
    CHECK(r.status == 400);
    CHECK(parse(r)["error"]["kind"] == "ValidationError");
    CHECK(parse(r)["error"]["path"] == "/reference/elements/2/box/width");
  }
  SUBCASE("missing side and broken JSON") {
    auto r = service.handle("POST", "/v1/score", json{{"candidate", to_json(cand)}}.dump());
    CHECK(r.status == 400);
    CHECK(parse(r)["error"]["path"] == "/reference");
    r = service.handle("POST", "/v1/score", "{\"candidate\":");
    CHECK(r.status == 400);
    CHECK(parse(r)["error"]["kind"] == "SchemaError");
  }
  SUBCASE("empty reference is 422") {
    const json body = {{"candidate", to_json(cand)}, {"reference", to_json(PageSnapshot{})}};
    const auto r = service.handle("POST", "/v1/score", body.dump());
    CHECK(r.status == 422);
    CHECK(parse(r)["error"]["kind"] == "EmptyReference");
  }
  SUBCASE("zero weights are rejected") {
    const json body = {{"candidate", to_json(cand)},
                       {"reference", to_json(ref)},
                       {"weights", {{"alpha", 0}, {"beta", 0}, {"gamma", 0}}}};
    const auto r = service.handle("POST", "/v1/score", body.dump());
    CHECK(r.status == 400);
    CHECK(parse(r)["error"]["kind"] == "WeightError");
  }
}

TEST_CASE("/v1/batch") {
  ScoringService service(local_config());
  std::mt19937 rng(11);
  json pairs = json::array();
  std::vector<std::pair<PageSnapshot, PageSnapshot>> pages;
  for (int i = 0; i < 6; ++i) {
    auto ref = random_page(rng, 1, 20);
    auto cand = i % 2 ? random_page(rng, 0, 20) : ref;
    pairs.push_back({{"candidate", to_json(cand)}, {"reference", to_json(ref)}});
    pages.emplace_back(cand, ref);
  }

  SUBCASE("reports and advantages") {
    const auto r = service.handle("POST", "/v1/batch", json{{"pairs", pairs}, {"group_size", 3}}.dump());
    REQUIRE(r.status == 200);
    const auto j = parse(r);
    REQUIRE(j["reports"].size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(j["reports"][i] == to_json(score_pair(pages[i].first, pages[i].second)));
    REQUIRE(j["advantages"].size() == 2);
  }
  SUBCASE("bad slot stays in its slot") {
    auto broken = pairs;
    broken[2]["reference"] = "not a snapshot";
    broken[4] = 17;
    const auto j = parse(service.handle("POST", "/v1/batch", json{{"pairs", broken}}.dump()));
    CHECK(j["reports"][2]["error"]["kind"] == "SchemaError");
    CHECK(j["reports"][2]["error"]["path"] == "/pairs/2/reference");
    CHECK(j["reports"][2]["reward"] == 0.0);
    CHECK(j["reports"][4]["error"]["path"] == "/pairs/4/candidate");
    CHECK(j["reports"][0].contains("rda"));
    CHECK_FALSE(j.contains("advantages"));
  }
  SUBCASE("indivisible group size is 400") {
    const auto r = service.handle("POST", "/v1/batch", json{{"pairs", pairs}, {"group_size", 4}}.dump());
    CHECK(r.status == 400);
    CHECK(parse(r)["error"]["kind"] == "GroupSizeError");
  }
  SUBCASE("pairs must be an array") {
    CHECK(service.handle("POST", "/v1/batch", json{{"pairs", 3}}.dump()).status == 400);
    CHECK(service.handle("POST", "/v1/batch", json{{"pairs", pairs}, {"group_size", "3"}}.dump()).status == 400);
  }
}

TEST_CASE("/v1/render-score") {
  const auto ref = parse_snapshot(fixture("two_elements.json"));
  const json body = {{"candidate_html", "<html><body>hi</body></html>"}, {"reference", to_json(ref)}};

  SUBCASE("no bridge configured") {
    ScoringService service(local_config());
    CHECK(service.handle("POST", "/v1/render-score", body.dump()).status == 501);
  }
  SUBCASE("bridge output is scored") {
    auto config = local_config();
    config.bridge_command = std::string("sh ") + DOMSCORE_FIXTURE_DIR + "/fake_bridge.sh";
    ScoringService service(config);
    const auto r = service.handle("POST", "/v1/render-score", body.dump());
    REQUIRE(r.status == 200);
    CHECK(parse(r)["reward"] == 1.0);
  }
  SUBCASE("failing bridge is 502") {
    auto config = local_config();
    config.bridge_command = "false";
    ScoringService service(config);
    CHECK(service.handle("POST", "/v1/render-score", body.dump()).status == 502);
  }
  SUBCASE("bridge emitting garbage is 502") {
    auto config = local_config();
    config.bridge_command = "echo nonsense; true";
    ScoringService service(config);
    CHECK(service.handle("POST", "/v1/render-score", body.dump()).status == 502);
  }
  SUBCASE("candidate_html must be a string") {
    auto config = local_config();
    config.bridge_command = "false";
    ScoringService service(config);
    const json bad = {{"candidate_html", 5}, {"reference", to_json(ref)}};
    CHECK(service.handle("POST", "/v1/render-score", bad.dump()).status == 400);
  }
}

TEST_CASE("HTTP round trip") {
  RunningServer server(local_config());
  auto client = server.client();

  auto health = client.Get("/healthz");
  REQUIRE(health);
  CHECK(health->status == 200);

  const auto cand = candidate_page();
  const auto ref = reference_page();
  const json body = {{"candidate", to_json(cand)}, {"reference", to_json(ref)}};
  auto res = client.Post("/v1/score", body.dump(), "application/json");
  REQUIRE(res);
  REQUIRE(res->status == 200);
  const auto remote = json::parse(res->body);
  const auto local = score_pair(cand, ref);
  CHECK(std::abs(remote["rda"].get<double>() - local.rda) <= 1e-9);
  CHECK(std::abs(remote["gda"].get<double>() - local.gda) <= 1e-9);
  CHECK(std::abs(remote["sda"].get<double>() - local.sda) <= 1e-9);
  CHECK(std::abs(remote["reward"].get<double>() - local.reward) <= 1e-9);

  res = client.Post("/v1/score", json{{"candidate", to_json(cand)}, {"reference", to_json(PageSnapshot{})}}.dump(),
                    "application/json");
  REQUIRE(res);
  CHECK(res->status == 422);
}
