#include "skyrx/assemble.hpp"

#include <algorithm>
#include <cstring>

#include "skyrx/binary_io.hpp"
#include "skyrx/formats.hpp"

namespace skyrx {

ReceivedCube::ReceivedCube(std::uint32_t id, std::uint32_t l, std::uint32_t s)
    : cube_id(id), lines(l), samples(s), line_present(l, 0), exposure_us(l, 0), ins_before(l), ins_after(l),
      rgb(3 * static_cast<std::size_t>(l) * s, 0.0f), scores(static_cast<std::size_t>(l) * s, 0.0f),
      display(static_cast<std::size_t>(l) * s, 0.0f) {}

std::size_t ReceivedCube::received_lines() const noexcept {
    return static_cast<std::size_t>(std::count(line_present.begin(), line_present.end(), 1));
}

double ReceivedCube::completion() const noexcept {
    return lines == 0 ? 0.0 : static_cast<double>(received_lines()) / lines;
}

std::vector<std::uint8_t> ReceivedCube::lost_pixels() const {
    std::vector<std::uint8_t> lost(static_cast<std::size_t>(lines) * samples, 0);
    for (std::uint32_t l = 0; l < lines; ++l) {
        if (!present(l)) std::fill_n(lost.begin() + static_cast<std::ptrdiff_t>(l) * samples, samples, 1);
    }
    return lost;
}

ScoreMap ReceivedCube::score_map() const {
    ScoreMap m;
    m.lines = lines;
    m.samples = samples;
    m.values = scores;
    m.max_score = max_score;
    return m;
}

std::vector<LineSplat> ReceivedCube::splats(const GeoOrigin& origin, double fov_deg, double ground_alt) const {
    const CameraModel camera{samples, fov_deg};
    std::vector<LineSplat> out;
    out.reserve(received_lines());
    for (std::uint32_t l = 0; l < lines; ++l) {
        if (!present(l)) continue;
        const Pose pose = interpolate_pose(ins_before[l], ins_after[l], exposure_us[l], origin);
        LineSplat sp;
        sp.points = project_line(pose, camera, ground_alt);
        const std::size_t px = static_cast<std::size_t>(l) * samples;
        sp.rgb.assign(rgb.begin() + static_cast<std::ptrdiff_t>(3 * px),
                      rgb.begin() + static_cast<std::ptrdiff_t>(3 * (px + samples)));
        sp.score.assign(display.begin() + static_cast<std::ptrdiff_t>(px),
                        display.begin() + static_cast<std::ptrdiff_t>(px + samples));
        out.push_back(std::move(sp));
    }
    return out;
}

void CubeAssembler::add(const DecodedLine& line) {
    const PacketHeader& h = line.header;
    if (!cube_) {
        cube_.emplace(h.cube_id, h.lines_per_cube, h.samples);
        cube_->max_score = h.max_score;
        cube_->max_r = h.max_r;
        cube_->max_g = h.max_g;
        cube_->max_b = h.max_b;
    } else {
        const ReceivedCube& c = *cube_;
        if (h.cube_id != c.cube_id || h.lines_per_cube != c.lines || h.samples != c.samples ||
            h.max_score != c.max_score || h.max_r != c.max_r || h.max_g != c.max_g || h.max_b != c.max_b) {
            throw ProtocolError("assemble: line " + std::to_string(h.line_index) +
                                " disagrees with cube " + std::to_string(c.cube_id) + " header fields");
        }
    }
    ReceivedCube& c = *cube_;
    const std::uint32_t l = h.line_index;
    const std::size_t px = static_cast<std::size_t>(l) * c.samples;
    std::copy(line.rgb.begin(), line.rgb.end(), c.rgb.begin() + static_cast<std::ptrdiff_t>(3 * px));
    std::copy(line.scores.begin(), line.scores.end(), c.scores.begin() + static_cast<std::ptrdiff_t>(px));
    std::copy(line.display.begin(), line.display.end(), c.display.begin() + static_cast<std::ptrdiff_t>(px));
    c.exposure_us[l] = h.exposure_start_us;
    c.ins_before[l] = h.ins_before;
    c.ins_after[l] = h.ins_after;
    c.line_present[l] = 1;
}

const ReceivedCube& CubeAssembler::cube() const {
    if (!cube_) throw InvalidInput("assemble: no line received yet");
    return *cube_;
}

ReceivedCube CubeAssembler::take() {
    ReceivedCube c = cube();
    cube_.reset();
    return c;
}

ReceivedCube assemble_cube(std::span<const LinePacket> packets) {
    if (packets.empty()) throw InvalidInput("assemble_cube: no packets");
    CubeAssembler a;
    for (const LinePacket& p : packets) a.add_packet(p);
    return a.take();
}

namespace {

void put_floats(ByteWriter& w, const std::vector<float>& v) {
    for (float x : v) w.f32(x);
}

void get_floats(ByteReader& r, std::vector<float>& v) {
    for (float& x : v) x = r.f32();
}

}  // namespace

std::vector<std::uint8_t> encode_received(const ReceivedCube& c) {
    std::vector<std::uint8_t> out;
    ByteWriter w(out);
    w.tag("HSR1");
    w.u32(c.cube_id);
    w.u32(c.lines);
    w.u32(c.samples);
    w.f32(c.max_score);
    w.f32(c.max_r);
    w.f32(c.max_g);
    w.f32(c.max_b);
    w.bytes(c.line_present);
    for (std::uint32_t l = 0; l < c.lines; ++l) {
        w.u64(c.exposure_us[l]);
        put_ins(w, c.ins_before[l]);
        put_ins(w, c.ins_after[l]);
    }
    put_floats(w, c.scores);
    put_floats(w, c.display);
    put_floats(w, c.rgb);
    return out;
}

ReceivedCube decode_received(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_tag("HSR1", "received cube");
    const std::uint32_t id = r.u32();
    const std::uint32_t lines = r.u32();
    const std::uint32_t samples = r.u32();
    const std::size_t pixels = static_cast<std::size_t>(lines) * samples;
    // Reject absurd dimensions before allocating.
    if (pixels * 20 + lines > r.remaining()) {
        throw FormatError("received cube: payload shorter than " + std::to_string(lines) + "x" +
                              std::to_string(samples) + " requires",
                          r.offset());
    }
    ReceivedCube c(id, lines, samples);
    c.max_score = r.f32();
    c.max_r = r.f32();
    c.max_g = r.f32();
    c.max_b = r.f32();
    for (std::uint32_t l = 0; l < lines; ++l) {
        const std::size_t at = r.offset();
        c.line_present[l] = r.u8();
        if (c.line_present[l] > 1) throw FormatError("received cube: presence flag must be 0 or 1", at);
    }
    for (std::uint32_t l = 0; l < lines; ++l) {
        c.exposure_us[l] = r.u64();
        c.ins_before[l] = get_ins(r);
        c.ins_after[l] = get_ins(r);
    }
    get_floats(r, c.scores);
    get_floats(r, c.display);
    get_floats(r, c.rgb);
    if (r.remaining() != 0) throw FormatError("received cube: trailing bytes", r.offset());
    return c;
}

void write_received(const std::string& path, const ReceivedCube& cube) {
    write_file_bytes(path, encode_received(cube));
}

ReceivedCube read_received(const std::string& path) { return decode_received(read_file_bytes(path)); }

}  // namespace skyrx
