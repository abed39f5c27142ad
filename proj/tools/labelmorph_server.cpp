#include <httplib.h>

#include <CLI11.hpp>

#include <csignal>
#include <iostream>

#include "labelmorph/service.hpp"

namespace {

httplib::Server* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HTTP service for interactive label transitions"};
  std::string config_file;
  std::optional<int> port;
  std::optional<std::string> host, dataset_dir;
  app.add_option("--config", config_file, "config JSON (port, dataset_dir, default_style, ...)");
  app.add_option("--port", port, "override the configured port");
  app.add_option("--host", host, "override the configured host");
  app.add_option("--dataset-dir", dataset_dir, "override the configured dataset directory");
  CLI11_PARSE(app, argc, argv);

  labelmorph::ServiceConfig config;
  try {
    if (!config_file.empty()) config = labelmorph::load_service_config(config_file);
  } catch (const labelmorph::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  if (port) config.port = *port;
  if (host) config.host = *host;
  if (dataset_dir) config.dataset_dir = *dataset_dir;

  labelmorph::Service service(config);
  httplib::Server server;
  labelmorph::mount_routes(server, service);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);

  std::cout << "listening on http://" << config.host << ":" << config.port << std::endl;
  if (!server.listen(config.host, config.port)) {
    std::cerr << "error: cannot listen on " << config.host << ":" << config.port << "\n";
    return 1;
  }
  return 0;
}
