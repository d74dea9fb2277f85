#include "service.hpp"

#include <sys/socket.h>

#include <chrono>
#include <sstream>

#include <httplib.h>
#include <json.hpp>

#include "skyrx/raster.hpp"

namespace skyrx {

using nlohmann::json;

namespace {

json bounds_json(const BoundingBox& b) {
    if (!b.valid()) return nullptr;
    return json::array({b.east0, b.north0, b.east1, b.north1});
}

BoundingBox parse_bbox(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        v.push_back(std::stod(item, &used));
        if (used != item.size()) throw InvalidInput("bbox: bad number \"" + item + "\"");
    }
    if (v.size() != 4) throw InvalidInput("bbox must be e0,n0,e1,n1");
    BoundingBox b{v[0], v[1], v[2], v[3]};
    if (!b.valid()) throw InvalidInput("bbox must satisfy e0 < e1 and n0 < n1");
    return b;
}

std::uint32_t parse_size(const httplib::Request& req, const char* key) {
    if (!req.has_param(key)) return 256;
    const std::string s = req.get_param_value(key);
    std::size_t used = 0;
    const long v = std::stol(s, &used);
    if (used != s.size() || v < 1 || v > 4096) throw InvalidInput(std::string(key) + " must be 1..4096");
    return static_cast<std::uint32_t>(v);
}

void send_error(httplib::Response& res, int status, const std::string& msg) {
    res.status = status;
    res.set_content(json{{"error", msg}}.dump(), "application/json");
}

// Only SO_REUSEADDR: the library default also sets SO_REUSEPORT, which would
// let a second server silently share a busy port.
void exclusive_socket_options(socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
}

}  // namespace

std::string event_json(const GroundEvent& e) {
    if (e.type == GroundEvent::Type::Cube) {
        return json{{"type", "cube"}, {"cube_id", e.cube_id}, {"completion", e.completion},
                    {"bounds", bounds_json(e.bounds)}}
            .dump();
    }
    return json{{"type", "line_batch"}, {"cube_id", e.cube_id}, {"count", e.count}}.dump();
}

std::string flight_json(const GroundStation& station) {
    json completion = json::array();
    const auto status = station.cube_status();
    for (const CubeStatus& s : status) completion.push_back(s.completion);
    const auto mosaic = station.mosaic();
    const auto gsd = station.gsd();
    return json{{"cubes", status.size()},
                {"completion", completion},
                {"bounds", mosaic ? bounds_json(raster_bounds(*mosaic)) : json(nullptr)},
                {"gsd", gsd ? json(*gsd) : json(nullptr)}}
        .dump();
}

void EventLog::push(std::string e) {
    {
        std::lock_guard lock(mu_);
        events_.push_back(std::move(e));
    }
    cv_.notify_all();
}

bool EventLog::wait_next(std::size_t cursor, std::string& out, int timeout_ms) {
    std::unique_lock lock(mu_);
    cv_.wait_for(lock, std::chrono::milliseconds(timeout_ms), [&] { return closed_ || cursor < events_.size(); });
    if (cursor >= events_.size()) return false;
    out = events_[cursor];
    return true;
}

void EventLog::close() {
    {
        std::lock_guard lock(mu_);
        closed_ = true;
    }
    cv_.notify_all();
}

bool EventLog::closed() const {
    std::lock_guard lock(mu_);
    return closed_;
}

std::size_t EventLog::size() const {
    std::lock_guard lock(mu_);
    return events_.size();
}

MapService::MapService(std::shared_ptr<GroundStation> station)
    : station_(std::move(station)), server_(std::make_unique<httplib::Server>()) {
    station_->subscribe([this](const GroundEvent& e) { events_.push(event_json(e)); });
    routes();
}

MapService::~MapService() { stop(); }

void MapService::routes() {
    server_->set_socket_options(exclusive_socket_options);
    server_->set_default_headers({{"Access-Control-Allow-Origin", "*"}});

    server_->Get("/api/flight", [this](const httplib::Request&, httplib::Response& res) {
        res.set_content(flight_json(*station_), "application/json");
    });

    server_->Get("/api/tile", [this](const httplib::Request& req, httplib::Response& res) {
        try {
            const std::string mode = req.has_param("mode") ? req.get_param_value("mode") : "rgb";
            if (mode != "rgb" && mode != "score") throw InvalidInput("mode must be rgb or score");
            if (!req.has_param("bbox")) throw InvalidInput("bbox is required");
            const BoundingBox box = parse_bbox(req.get_param_value("bbox"));
            const std::uint32_t w = parse_size(req, "w");
            const std::uint32_t h = parse_size(req, "h");
            // One snapshot per request, so a concurrent rebuild never tears a tile.
            const std::shared_ptr<const Raster> mosaic = station_->mosaic();
            const Raster empty;
            const Raster& r = mosaic ? *mosaic : empty;
            const TileMode m = mode == "rgb" ? TileMode::Rgb : TileMode::Score;
            auto png = render_tile(r, m, box, w, h, raster_channel_max(r));
            res.set_content(std::string(png.begin(), png.end()), "image/png");
        } catch (const std::invalid_argument& e) {
            send_error(res, 400, e.what());
        } catch (const std::out_of_range& e) {
            send_error(res, 400, e.what());
        }
    });

    server_->Get("/api/events", [this](const httplib::Request&, httplib::Response& res) {
        auto cursor = std::make_shared<std::size_t>(0);
        res.set_header("Cache-Control", "no-cache");
        res.set_chunked_content_provider("text/event-stream", [this, cursor](std::size_t, httplib::DataSink& sink) {
            std::string e;
            if (events_.wait_next(*cursor, e, 500)) {
                ++*cursor;
                const std::string msg = "data: " + e + "\n\n";
                return sink.write(msg.data(), msg.size());
            }
            if (events_.closed()) {
                sink.done();
                return true;
            }
            static const std::string keepalive = ": keepalive\n\n";
            return sink.write(keepalive.data(), keepalive.size());
        });
    });
}

void MapService::start(const std::string& host, std::uint16_t port) {
    if (thread_.joinable()) throw ServiceError("service already running");
    int bound = port;
    if (port == 0) {
        bound = server_->bind_to_any_port(host);
        if (bound < 0) throw ServiceError("cannot bind any port on " + host);
    } else if (!server_->bind_to_port(host, port)) {
        throw ServiceError("cannot bind " + host + ":" + std::to_string(port) + " (port busy?)");
    }
    port_ = static_cast<std::uint16_t>(bound);
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

void MapService::stop() {
    events_.close();
    if (server_) server_->stop();
    if (thread_.joinable()) thread_.join();
}

}  // namespace skyrx
