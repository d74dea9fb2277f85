#include "skyrx/ground.hpp"

#include <algorithm>
#include <limits>

namespace skyrx {

namespace {

BoundingBox footprint(std::span<const LineSplat> lines) {
    double e0 = std::numeric_limits<double>::infinity(), n0 = e0;
    double e1 = -e0, n1 = -e0;
    for (const LineSplat& l : lines) {
        for (const GroundPoint& p : l.points) {
            if (!p.valid) continue;
            e0 = std::min(e0, p.east);
            e1 = std::max(e1, p.east);
            n0 = std::min(n0, p.north);
            n1 = std::max(n1, p.north);
        }
    }
    if (!(e1 >= e0)) return {};
    return {e0, n0, e1, n1};
}

}  // namespace

GroundStation::GroundStation(GroundConfig config) : config_(config), gsd_(config.gsd) {
    if (config_.gsd && !(*config_.gsd > 0.0)) throw InvalidInput("ground: gsd must be > 0");
}

void GroundStation::subscribe(std::function<void(const GroundEvent&)> listener) {
    std::lock_guard lock(ingest_mu_);
    listeners_.push_back(std::move(listener));
}

void GroundStation::emit(const GroundEvent& e) {
    for (const auto& l : listeners_) l(e);
}

void GroundStation::ingest_record(std::span<const std::uint8_t> bytes) {
    Frame f;
    try {
        f = decode_frame(bytes);
    } catch (const std::exception&) {
        std::lock_guard lock(snap_mu_);
        ++counters_.frames;
        ++counters_.malformed;
        return;
    }
    ingest(f);
}

void GroundStation::ingest(const Frame& frame) {
    std::lock_guard lock(ingest_mu_);
    {
        std::lock_guard s(snap_mu_);
        ++counters_.frames;
    }
    const std::uint32_t total = codec_.data_count() + codec_.parity_count();
    const bool kind_ok = (frame.kind == FrameKind::Data) == (frame.index < codec_.data_count());
    if (frame.index >= total || !kind_ok) {
        std::lock_guard s(snap_mu_);
        ++counters_.malformed;
        return;
    }
    if (closed_groups_.count(frame.group_id)) {
        std::lock_guard s(snap_mu_);
        ++counters_.late;
        return;
    }

    // No reordering on the link: a new group id means earlier groups are done.
    close_groups_except(frame.group_id);

    PendingGroup& g = pending_[frame.group_id];
    if (g.indices.count(frame.index)) {
        std::lock_guard s(snap_mu_);
        ++counters_.duplicates;
        return;
    }
    g.indices.insert(frame.index);
    g.frames.push_back(frame);
    // Data lines are shown as soon as they arrive.
    if (frame.kind == FrameKind::Data) add_line(frame.payload, g);

    if (g.indices.size() == total) close_group(frame.group_id);
}

void GroundStation::add_line(std::span<const std::uint8_t> payload, PendingGroup& group) {
    try {
        DecodedLine line = decode_line(payload);
        const std::uint32_t id = line.header.cube_id;
        if (closed_cubes_.count(id)) {
            std::lock_guard s(snap_mu_);
            ++counters_.late;
            return;
        }
        open_cubes_[id].add(line);
        groups_per_cube_[id] = std::max<std::uint32_t>(1, line.header.lines_per_cube / codec_.data_count());
        group.cube_id = id;
        ++group.lines_added;
    } catch (const std::exception&) {
        std::lock_guard s(snap_mu_);
        ++counters_.malformed;
    }
}

void GroundStation::close_groups_except(std::optional<std::uint32_t> keep) {
    std::vector<std::uint32_t> ids;
    for (const auto& [id, g] : pending_) {
        if (!keep || id != *keep) ids.push_back(id);
    }
    for (std::uint32_t id : ids) close_group(id);
}

void GroundStation::close_group(std::uint32_t group_id) {
    auto it = pending_.find(group_id);
    if (it == pending_.end()) return;
    PendingGroup g = std::move(it->second);
    pending_.erase(it);
    closed_groups_.insert(group_id);

    FecDecodeResult res;
    try {
        res = fec_decode(g.frames, codec_);
    } catch (const std::exception&) {
        std::lock_guard s(snap_mu_);
        ++counters_.malformed;  // inconsistent parity; keep the lines already shown
    }
    for (std::uint32_t idx : res.recovered) {
        const std::size_t before = g.lines_added;
        add_line(*res.data[idx], g);
        if (g.lines_added > before) {
            std::lock_guard s(snap_mu_);
            ++counters_.recovered;
        }
    }
    if (!g.cube_id) return;  // nothing decodable in this group
    const std::uint32_t cube = *g.cube_id;
    emit({GroundEvent::Type::LineBatch, cube, 0.0, {}, g.lines_added});

    // Cubes before this one can no longer receive lines; the cube itself is
    // complete once its last group has been closed.
    std::vector<std::uint32_t> done;
    for (const auto& [id, a] : open_cubes_) {
        if (id < cube) done.push_back(id);
    }
    const std::uint32_t gpc = groups_per_cube_[cube];
    if (group_id % gpc == gpc - 1) done.push_back(cube);
    for (std::uint32_t id : done) close_cube(id);
}

void GroundStation::close_cube(std::uint32_t cube_id) {
    auto it = open_cubes_.find(cube_id);
    if (it == open_cubes_.end()) return;
    ReceivedCube cube = it->second.take();
    open_cubes_.erase(it);
    closed_cubes_.insert(cube_id);

    std::vector<LineSplat> lines = cube.splats(config_.origin, config_.fov_deg, config_.ground_alt);
    const BoundingBox box = footprint(lines);
    for (LineSplat& l : lines) splats_.push_back(std::move(l));
    const CubeStatus st{cube_id, cube.completion(), box};
    {
        std::lock_guard s(snap_mu_);
        status_.push_back(st);
        finished_.push_back(std::move(cube));
    }
    rebuild_mosaic();
    emit({GroundEvent::Type::Cube, cube_id, st.completion, box, 0});
}

void GroundStation::rebuild_mosaic() {
    std::optional<double> gsd;
    {
        std::lock_guard s(snap_mu_);
        gsd = gsd_;
    }
    std::shared_ptr<const Raster> next;
    if (!splats_.empty()) {
        try {
            if (!gsd) gsd = median_sample_spacing(splats_);
            next = std::make_shared<const Raster>(rasterize(splats_, gsd));
        } catch (const InvalidInput&) {
            next.reset();  // no valid ground point yet
        }
    }
    std::lock_guard s(snap_mu_);
    gsd_ = gsd;
    mosaic_ = std::move(next);
}

void GroundStation::finish() {
    std::lock_guard lock(ingest_mu_);
    close_groups_except(std::nullopt);
    std::vector<std::uint32_t> ids;
    for (const auto& [id, a] : open_cubes_) ids.push_back(id);
    for (std::uint32_t id : ids) close_cube(id);
}

void GroundStation::set_gsd(std::optional<double> gsd) {
    if (gsd && !(*gsd > 0.0)) throw InvalidInput("ground: gsd must be > 0");
    std::lock_guard lock(ingest_mu_);
    {
        std::lock_guard s(snap_mu_);
        gsd_ = gsd;
    }
    rebuild_mosaic();
}

std::shared_ptr<const Raster> GroundStation::mosaic() const {
    std::lock_guard s(snap_mu_);
    return mosaic_;
}

std::vector<CubeStatus> GroundStation::cube_status() const {
    std::lock_guard s(snap_mu_);
    return status_;
}

std::vector<ReceivedCube> GroundStation::cubes() const {
    std::lock_guard s(snap_mu_);
    return finished_;
}

std::optional<double> GroundStation::gsd() const {
    std::lock_guard s(snap_mu_);
    return gsd_;
}

GroundCounters GroundStation::counters() const {
    std::lock_guard s(snap_mu_);
    return counters_;
}

GroundResult run_ground(std::span<const std::vector<std::uint8_t>> records, const GroundConfig& config) {
    GroundStation st(config);
    for (const auto& r : records) st.ingest_record(r);
    st.finish();
    return {st.cubes(), st.mosaic(), st.counters()};
}

GroundResult run_ground(std::span<const Frame> frames, const GroundConfig& config) {
    GroundStation st(config);
    for (const Frame& f : frames) st.ingest(f);
    st.finish();
    return {st.cubes(), st.mosaic(), st.counters()};
}

}  // namespace skyrx
