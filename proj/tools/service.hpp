#pragma once

// HTTP front end for the ground station: flight summary, map tiles and a
// server-sent event stream of cube and line-batch events.

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "skyrx/ground.hpp"

namespace httplib {
class Server;
}

namespace skyrx {

class ServiceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string event_json(const GroundEvent& e);
std::string flight_json(const GroundStation& station);

// Append-only event log; each stream connection keeps its own cursor.
class EventLog {
public:
    void push(std::string json);
    // Waits up to `timeout_ms` for an event at `cursor`.
    bool wait_next(std::size_t cursor, std::string& out, int timeout_ms);
    void close();
    bool closed() const;
    std::size_t size() const;

private:
    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::vector<std::string> events_;
    bool closed_ = false;
};

class MapService {
public:
    explicit MapService(std::shared_ptr<GroundStation> station);
    ~MapService();

    MapService(const MapService&) = delete;
    MapService& operator=(const MapService&) = delete;

    // Binds and serves on a background thread. Port 0 picks a free port.
    // Throws ServiceError when the port cannot be bound.
    void start(const std::string& host, std::uint16_t port);
    void stop();
    std::uint16_t port() const noexcept { return port_; }

    EventLog& events() noexcept { return events_; }

private:
    void routes();

    std::shared_ptr<GroundStation> station_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    EventLog events_;
    std::uint16_t port_ = 0;
};

}  // namespace skyrx
