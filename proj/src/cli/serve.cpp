#include <httplib.h>

#include <mutex>
#include <regex>

#include <json.hpp>

#include "tiltmap/cli.hpp"
#include "tiltmap/geodata.hpp"
#include "tiltmap/morph.hpp"
#include "tiltmap/thematic.hpp"

namespace tiltmap {
namespace fs = std::filesystem;

namespace {

void no_port_sharing(socket_t sock) {
  int yes = 1;
  setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
}

std::string content_type_for(const fs::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".json" || ext == ".geojson") return "application/json";
  if (ext == ".jsonl") return "application/x-ndjson";
  if (ext == ".html") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "text/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".wasm") return "application/wasm";
  if (ext == ".png") return "image/png";
  return "application/octet-stream";
}

/// Resolves a request path under root; nullopt for anything escaping it.
std::optional<fs::path> resolve_under(const fs::path& root, const std::string& rel) {
  fs::path candidate = fs::path(rel).relative_path().lexically_normal();
  if (candidate.empty()) return std::nullopt;
  for (const auto& part : candidate) {
    if (part == "..") return std::nullopt;
  }
  std::error_code ec;
  const fs::path base = fs::weakly_canonical(root, ec);
  const fs::path full = fs::weakly_canonical(root / candidate, ec);
  if (ec) return std::nullopt;
  const auto [b, f] = std::mismatch(base.begin(), base.end(), full.begin(), full.end());
  if (b != base.end()) return std::nullopt;
  return full;
}

void send_error(httplib::Response& res, int status, const std::string& name, const std::string& detail) {
  res.status = status;
  res.set_content(nlohmann::json{{"error", name}, {"detail", detail}}.dump(), "application/json");
}

}  // namespace

ServeConfig ServeConfig::load(const fs::path& path) {
  const std::string text = read_text_file(path);
  try {
    const auto doc = nlohmann::json::parse(text);
    const fs::path base = path.parent_path();
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };
    ServeConfig c;
    c.data_dir = resolve(doc.at("dataDir").get<std::string>());
    c.out_dir = resolve(doc.at("outDir").get<std::string>());
    if (doc.contains("map") && !doc["map"].is_null()) c.map = resolve(doc["map"].get<std::string>());
    if (doc.contains("layer") && !doc["layer"].is_null()) c.layer = resolve(doc["layer"].get<std::string>());
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, path.string() + ": " + e.what());
  }
}

struct DataServer::Impl {
  ServeConfig config;
  httplib::Server server;
  std::optional<GeoMap> map;
  std::optional<ThematicLayer> layer;
  std::optional<MapGeometry> geometry;
  std::mutex write_mutex;

  explicit Impl(ServeConfig c) : config(std::move(c)) {
    if (config.map) {
      map = read_mapfile(read_text_file(*config.map));
      geometry = prepare_geometry(*map);
    }
    if (config.layer) layer = read_layerfile(read_text_file(*config.layer));
    server.set_socket_options(no_port_sharing);
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, PUT, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    routes();
  }

  void routes() {
    server.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    server.Get("/api/scene", [this](const httplib::Request& req, httplib::Response& res) {
      if (!map || !layer) return send_error(res, 404, "InvalidState", "server has no map and layer configured");
      try {
        const double tilt = req.has_param("tilt") ? std::stod(req.get_param_value("tilt")) : 0.0;
        const double az = req.has_param("azimuth") ? std::stod(req.get_param_value("azimuth")) : 0.0;
        const Style style = parse_style(req.has_param("style") ? req.get_param_value("style") : "tiltMap");
        const PhaseSchedule schedule =
            req.has_param("schedule") ? PhaseSchedule::parse(req.get_param_value("schedule")) : PhaseSchedule{};
        const TiltState state = tilt_state_at(*map, tilt, az, schedule);
        res.set_content(write_scenefile(scene(*geometry, *map, *layer, style, state, schedule)), "application/json");
      } catch (const Error& e) {
        send_error(res, 400, std::string(e.name()), e.what());
      } catch (const std::exception& e) {
        send_error(res, 400, "InvalidArgument", e.what());
      }
    });

    server.Put(R"(/traces/([A-Za-z0-9_][A-Za-z0-9._-]*))", [this](const httplib::Request& req, httplib::Response& res) {
      const std::string name = req.matches[1];
      try {
        std::lock_guard lock(write_mutex);
        write_text_file(config.out_dir / name, req.body);
        res.status = 201;
        res.set_content(nlohmann::json{{"stored", name}, {"bytes", req.body.size()}}.dump(), "application/json");
      } catch (const Error& e) {
        send_error(res, 500, std::string(e.name()), e.what());
      }
    });

    server.Get(R"(/(.*))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto path = resolve_under(config.data_dir, req.matches[1]);
      std::error_code ec;
      if (!path || !fs::is_regular_file(*path, ec)) return send_error(res, 404, "NotFound", req.path);
      try {
        res.set_content(read_text_file(*path), content_type_for(*path));
      } catch (const Error& e) {
        send_error(res, 500, std::string(e.name()), e.what());
      }
    });
  }
};

DataServer::DataServer(ServeConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

DataServer::~DataServer() { stop(); }

int DataServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound <= 0) throw Error(Errc::PortInUse, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void DataServer::run() { impl_->server.listen_after_bind(); }

void DataServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace tiltmap
