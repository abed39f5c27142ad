#include "labelmorph/service.hpp"

#include <filesystem>

namespace labelmorph {

namespace {

Response error(int status, const std::string& message) { return {status, Json{{"error", message}}}; }

bool safe_name(const std::string& s) {
  if (s.empty() || s.front() == '.') return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  });
}

struct NotFound : Error {
  using Error::Error;
};

}  // namespace

ServiceConfig service_config_from_json(const Json& j) {
  if (!j.is_object()) throw Error("service config must be a JSON object");
  ServiceConfig c;
  try {
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.dataset_dir = j.value("dataset_dir", c.dataset_dir);
    if (j.contains("default_style")) c.default_style = parse_style(j.at("default_style").get<std::string>());
    c.default_scenario = j.value("default_scenario", c.default_scenario);
    c.cors_origin = j.value("cors_origin", c.cors_origin);
    if (j.contains("screen")) {
      const auto& s = j.at("screen");
      c.screen.width_px = s.value("width_px", c.screen.width_px);
      c.screen.height_px = s.value("height_px", c.screen.height_px);
      c.screen.label_width_px = s.value("label_width_px", c.screen.label_width_px);
      c.screen.label_height_px = s.value("label_height_px", c.screen.label_height_px);
      c.screen.min_zoom = s.value("min_zoom", c.screen.min_zoom);
      c.screen.max_zoom = s.value("max_zoom", c.screen.max_zoom);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid service config: ") + e.what());
  }
  if (c.port < 0 || c.port > 65535) throw Error("port out of range");
  scenario_preset(c.default_scenario);
  return c;
}

ServiceConfig load_service_config(const std::string& path) { return service_config_from_json(read_json_file(path)); }

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

std::shared_ptr<const PointStore> Service::dataset(const std::string& id) {
  {
    std::lock_guard lock(mu_);
    if (auto it = datasets_.find(id); it != datasets_.end()) return it->second;
  }
  std::shared_ptr<const PointStore> store;
  if (id == "synthetic" || id.rfind("synthetic:", 0) == 0) {
    std::uint64_t seed = 1;
    std::string scenario = config_.default_scenario;
    if (id.size() > 10) {
      const std::string rest = id.substr(10);
      const auto colon = rest.find(':');
      try {
        std::size_t used = 0;
        const std::string num = rest.substr(0, colon);
        seed = std::stoull(num, &used);
        if (used != num.size()) throw Error("");
      } catch (const std::exception&) {
        throw NotFound("unknown dataset '" + id + "'");
      }
      if (colon != std::string::npos) scenario = rest.substr(colon + 1);
    }
    try {
      store = std::make_shared<const PointStore>(synthetic_dataset(synthetic_options(scenario_preset(scenario), seed)));
    } catch (const Error&) {
      throw NotFound("unknown dataset '" + id + "'");
    }
  } else {
    if (!safe_name(id)) throw NotFound("unknown dataset '" + id + "'");
    namespace fs = std::filesystem;
    for (const char* ext : {".csv", ".json"}) {
      const fs::path p = fs::path(config_.dataset_dir) / (id + ext);
      if (fs::is_regular_file(p)) {
        store = std::make_shared<const PointStore>(load_dataset(p.string()));
        break;
      }
    }
    if (!store) throw NotFound("unknown dataset '" + id + "'");
  }
  std::lock_guard lock(mu_);
  return datasets_.emplace(id, store).first->second;
}

Json Service::snapshot_of(const std::string& id, const Entry& e) {
  const Session& s = *e.session;
  return {{"session_id", id},
          {"dataset", e.dataset_id},
          {"style", to_string(s.config().style)},
          {"transitions", s.transitions()},
          {"view", view_to_json(s.view())},
          {"labeling", labeling_to_json(s.catalog(), s.labeling())}};
}

Response Service::create_session(const Json& body) {
  if (!body.is_object() || !body.contains("dataset") || !body.at("dataset").is_string()) {
    return error(400, "body needs a \"dataset\" string");
  }
  auto entry = std::make_shared<Entry>();
  entry->dataset_id = body.at("dataset").get<std::string>();
  std::shared_ptr<const PointStore> store;
  try {
    store = dataset(entry->dataset_id);
  } catch (const NotFound& e) {
    return error(404, e.what());
  } catch (const Error& e) {
    return error(422, e.what());
  }
  ScenarioConfig sc;
  sc.screen = config_.screen;
  sc.style = config_.default_style;
  ViewState view;
  try {
    if (body.contains("style")) sc.style = parse_style(body.at("style").get<std::string>());
    if (body.contains("policy")) sc.policy = parse_policy(body.at("policy").get<std::string>());
    const auto& preset = scenario_preset(body.value("scenario", config_.default_scenario));
    view = preset_view(preset, sc.screen);
    if (body.contains("view")) {
      const auto& v = body.at("view");
      const TimePoint t = v.contains("time") ? parse_rfc3339(v.at("time").get<std::string>()) : view.time;
      view = make_view(v.value("lon", view.lon), v.value("lat", view.lat), v.value("zoom", view.zoom), t, sc.screen);
    }
    entry->session = std::make_unique<Session>(store, view, sc);
  } catch (const Error& e) {
    return error(400, e.what());
  } catch (const nlohmann::json::exception& e) {
    return error(400, std::string("malformed request: ") + e.what());
  }

  std::string id;
  {
    std::lock_guard lock(mu_);
    id = "s" + std::to_string(next_id_++);
    entry->snapshot = std::make_shared<const Json>(snapshot_of(id, *entry));
    sessions_.emplace(id, entry);
  }
  return {201, *entry->snapshot};
}

std::shared_ptr<Service::Entry> Service::find(const std::string& id) const {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

Response Service::interact(const std::string& id, const Json& body) {
  const auto entry = find(id);
  if (!entry) return error(404, "unknown session '" + id + "'");
  Action action;
  try {
    action = action_from_json(body.is_object() && body.contains("action") ? body.at("action") : body);
  } catch (const Error& e) {
    return error(400, e.what());
  }

  std::lock_guard writer(entry->writer);
  TransitionRecord r;
  try {
    r = entry->session->interact(action);
  } catch (const Error& e) {
    return error(400, e.what());
  }
  auto snap = std::make_shared<const Json>(snapshot_of(id, *entry));
  Json out{{"session_id", id},
           {"index", r.index},
           {"action", to_string(r.action)},
           {"view", view_to_json(r.after)},
           {"from", labeling_to_json(r.catalog, r.from)},
           {"labeling", snap->at("labeling")},
           {"plan", plan_to_json(r.plan, r.catalog, &r.report)},
           {"metrics", transition_to_json(r, false)}};
  {
    std::lock_guard lock(entry->snapshot_mu);
    entry->snapshot = std::move(snap);
  }
  return {200, std::move(out)};
}

Response Service::state(const std::string& id) const {
  const auto entry = find(id);
  if (!entry) return error(404, "unknown session '" + id + "'");
  std::shared_ptr<const Json> snap;
  {
    std::lock_guard lock(entry->snapshot_mu);
    snap = entry->snapshot;
  }
  return {200, *snap};
}

Response Service::list_datasets() const {
  Json files = Json::array();
  namespace fs = std::filesystem;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(config_.dataset_dir, ec)) {
    const auto ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".csv" || ext == ".json") && safe_name(e.path().stem().string())) {
      files.push_back(e.path().stem().string());
    }
  }
  std::sort(files.begin(), files.end());
  Json scenarios = Json::array();
  for (const auto& p : scenario_presets()) scenarios.push_back(p.name);
  return {200, Json{{"datasets", files}, {"synthetic", "synthetic[:seed[:scenario]]"}, {"scenarios", scenarios}}};
}

}  // namespace labelmorph
