#pragma once

// Ground side: frames in, FEC-decoded lines assembled per cube, cubes
// projected and splatted into a growing north-up mosaic. Readers get
// immutable snapshots; every setting change rebuilds from retained lines.

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "skyrx/assemble.hpp"
#include "skyrx/fec.hpp"
#include "skyrx/raster.hpp"

namespace skyrx {

struct GroundConfig {
    GeoOrigin origin;
    double fov_deg = 47.5;
    double ground_alt = 0.0;
    std::optional<double> gsd;  // default: median sample spacing of the first cube
};

struct GroundEvent {
    enum class Type { Cube, LineBatch };

    Type type = Type::Cube;
    std::uint32_t cube_id = 0;
    double completion = 0.0;  // cube events
    BoundingBox bounds;       // cube events: footprint of the cube's received lines
    std::size_t count = 0;    // line_batch events: lines added by one FEC group
};

struct CubeStatus {
    std::uint32_t cube_id = 0;
    double completion = 0.0;
    BoundingBox bounds;
};

struct GroundCounters {
    std::size_t frames = 0;
    std::size_t malformed = 0;
    std::size_t duplicates = 0;
    std::size_t late = 0;       // frames for a group or cube already closed
    std::size_t recovered = 0;  // data lines rebuilt from parity
};

class GroundStation {
public:
    explicit GroundStation(GroundConfig config = {});

    // Undecodable records are counted and skipped.
    void ingest_record(std::span<const std::uint8_t> bytes);
    void ingest(const Frame& frame);
    // Closes every open group and cube.
    void finish();

    // Listeners run on the ingesting thread.
    void subscribe(std::function<void(const GroundEvent&)> listener);

    std::shared_ptr<const Raster> mosaic() const;
    std::vector<CubeStatus> cube_status() const;
    std::vector<ReceivedCube> cubes() const;
    std::optional<double> gsd() const;
    GroundCounters counters() const;

    // Re-rasterizes all retained lines before returning.
    void set_gsd(std::optional<double> gsd);

private:
    struct PendingGroup {
        std::vector<Frame> frames;
        std::set<std::uint8_t> indices;
        std::optional<std::uint32_t> cube_id;
        std::size_t lines_added = 0;
    };

    void close_group(std::uint32_t group_id);
    void close_cube(std::uint32_t cube_id);
    void close_groups_except(std::optional<std::uint32_t> keep);
    void add_line(std::span<const std::uint8_t> payload, PendingGroup& group);
    void rebuild_mosaic();
    void emit(const GroundEvent& e);

    GroundConfig config_;
    ReedSolomon codec_;

    // Ingest-side state, touched only under ingest_mu_.
    mutable std::mutex ingest_mu_;
    std::map<std::uint32_t, PendingGroup> pending_;
    std::set<std::uint32_t> closed_groups_;
    std::map<std::uint32_t, CubeAssembler> open_cubes_;
    std::map<std::uint32_t, std::uint32_t> groups_per_cube_;
    std::set<std::uint32_t> closed_cubes_;
    std::vector<LineSplat> splats_;
    std::vector<std::function<void(const GroundEvent&)>> listeners_;

    // Published snapshot.
    mutable std::mutex snap_mu_;
    std::shared_ptr<const Raster> mosaic_;
    std::vector<CubeStatus> status_;
    std::vector<ReceivedCube> finished_;
    std::optional<double> gsd_;
    GroundCounters counters_;
};

struct GroundResult {
    std::vector<ReceivedCube> cubes;
    std::shared_ptr<const Raster> mosaic;
    GroundCounters counters;
};

GroundResult run_ground(std::span<const std::vector<std::uint8_t>> records, const GroundConfig& config = {});
GroundResult run_ground(std::span<const Frame> frames, const GroundConfig& config = {});

}  // namespace skyrx
