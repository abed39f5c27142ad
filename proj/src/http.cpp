#include <httplib.h>

#include "labelmorph/service.hpp"

namespace labelmorph {

namespace {

void reply(httplib::Response& res, const Response& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

// Empty bodies count as {}; anything else must parse.
bool parse_body(const httplib::Request& req, httplib::Response& res, Json& out) {
  if (req.body.empty()) {
    out = Json::object();
    return true;
  }
  try {
    out = Json::parse(req.body);
    return true;
  } catch (const nlohmann::json::exception& e) {
    reply(res, {400, Json{{"error", std::string("invalid JSON body: ") + e.what()}}});
    return false;
  }
}

}  // namespace

void mount_routes(httplib::Server& server, Service& service) {
  server.set_default_headers({{"Access-Control-Allow-Origin", service.config().cors_origin},
                              {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                              {"Access-Control-Allow-Headers", "Content-Type"}});
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    reply(res, {200, Json{{"status", "ok"}, {"plan_format", "labelmorph.plan"}, {"version", kFormatVersion}}});
  });
  server.Get("/datasets", [&service](const httplib::Request&, httplib::Response& res) {
    reply(res, service.list_datasets());
  });
  server.Post("/sessions", [&service](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (parse_body(req, res, body)) reply(res, service.create_session(body));
  });
  server.Post(R"(/sessions/([^/]+)/interact)", [&service](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (parse_body(req, res, body)) reply(res, service.interact(req.matches[1], body));
  });
  server.Get(R"(/sessions/([^/]+)/state)", [&service](const httplib::Request& req, httplib::Response& res) {
    reply(res, service.state(req.matches[1]));
  });
  server.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) res.set_content(Json{{"error", "not found"}}.dump(), "application/json");
  });
}

}  // namespace labelmorph
