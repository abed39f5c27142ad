#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "labelmorph/io.hpp"
#include "labelmorph/scenario.hpp"

namespace httplib {
class Server;
}

namespace labelmorph {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string dataset_dir = ".";
  TransitionStyle default_style = TransitionStyle::Dag;
  std::string default_scenario = "italy";
  std::string cors_origin = "*";
  ScreenConfig screen;
};

/// Keys: host, port, dataset_dir, default_style, default_scenario,
/// cors_origin, screen {width_px, height_px, label_width_px, label_height_px,
/// min_zoom, max_zoom}. Missing keys keep their defaults.
ServiceConfig service_config_from_json(const Json& j);
ServiceConfig load_service_config(const std::string& path);

struct Response {
  int status = 200;
  Json body;
};

/// Session bookkeeping behind the HTTP routes. Each session has its own
/// writer lock; reads return the last published snapshot, so a read never
/// waits for an interaction and never sees half of one.
class Service {
 public:
  explicit Service(ServiceConfig config);

  const ServiceConfig& config() const { return config_; }

  /// Body: {"dataset": id, "style"?, "scenario"?, "view"? {lon, lat, zoom, time}}.
  Response create_session(const Json& body);
  /// Body: an action string/object, or {"action": ...}.
  Response interact(const std::string& id, const Json& body);
  Response state(const std::string& id) const;
  Response list_datasets() const;

  /// "synthetic", "synthetic:<seed>", or a .csv/.json file name (without the
  /// extension) in the dataset directory. Loaded once and shared.
  std::shared_ptr<const PointStore> dataset(const std::string& id);

 private:
  struct Entry {
    std::mutex writer;
    std::unique_ptr<Session> session;
    std::string dataset_id;
    mutable std::mutex snapshot_mu;
    std::shared_ptr<const Json> snapshot;
  };

  std::shared_ptr<Entry> find(const std::string& id) const;
  static Json snapshot_of(const std::string& id, const Entry& e);

  ServiceConfig config_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::map<std::string, std::shared_ptr<const PointStore>> datasets_;
  std::uint64_t next_id_ = 1;
};

/// Routes: POST /sessions, POST /sessions/{id}/interact, GET /sessions/{id}/state,
/// GET /datasets, GET /health; CORS headers on every response.
void mount_routes(httplib::Server& server, Service& service);

}  // namespace labelmorph
