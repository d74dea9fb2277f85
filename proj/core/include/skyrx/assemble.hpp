#pragma once

// Receive-side cube reconstruction. Lines that never arrive stay black with
// zero score and are flagged absent; any single received line is enough to
// yield a valid cube.
//
// .hsr  "HSR1" u32 cube_id u32 lines u32 samples f32 max_score f32 max_r/g/b
//       u8 present[lines], per line (u64 exposure, ins_before, ins_after),
//       f32 scores[lines*samples], f32 display[lines*samples], f32 rgb[3*lines*samples]

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skyrx/geo.hpp"
#include "skyrx/packet.hpp"

namespace skyrx {

struct ReceivedCube {
    std::uint32_t cube_id = 0;
    std::uint32_t lines = 0;
    std::uint32_t samples = 0;
    float max_score = 0.0f;
    float max_r = 0.0f, max_g = 0.0f, max_b = 0.0f;
    std::vector<std::uint8_t> line_present;
    std::vector<std::uint64_t> exposure_us;
    std::vector<InsSample> ins_before;
    std::vector<InsSample> ins_after;
    std::vector<float> rgb;      // 3 per pixel, radiance units; 0 on missing lines
    std::vector<float> scores;   // delta' per pixel; 0 on missing lines
    std::vector<float> display;  // sqrt(delta / max) as transmitted

    ReceivedCube() = default;
    ReceivedCube(std::uint32_t id, std::uint32_t lines, std::uint32_t samples);

    std::size_t received_lines() const noexcept;
    double completion() const noexcept;
    bool present(std::uint32_t line) const noexcept { return line_present[line] != 0; }

    // Per-pixel lost flags (1 on missing lines), row-major.
    std::vector<std::uint8_t> lost_pixels() const;
    ScoreMap score_map() const;

    // Projected splats for every received line, using the pose interpolated
    // at the line's exposure start.
    std::vector<LineSplat> splats(const GeoOrigin& origin, double fov_deg = 47.5, double ground_alt = 0.0) const;

    bool operator==(const ReceivedCube&) const = default;
};

class CubeAssembler {
public:
    // Adds one decoded line. Throws ProtocolError when the line disagrees with
    // previously accepted lines about shared cube fields. Re-adding a line
    // replaces it, so duplicates are harmless.
    void add(const DecodedLine& line);
    void add_packet(std::span<const std::uint8_t> packet) { add(decode_line(packet)); }

    bool empty() const noexcept { return !cube_.has_value(); }
    const ReceivedCube& cube() const;
    ReceivedCube take();

private:
    std::optional<ReceivedCube> cube_;
};

// Throws InvalidInput when no packet is given.
ReceivedCube assemble_cube(std::span<const LinePacket> packets);

std::vector<std::uint8_t> encode_received(const ReceivedCube& cube);
ReceivedCube decode_received(std::span<const std::uint8_t> bytes);
void write_received(const std::string& path, const ReceivedCube& cube);
ReceivedCube read_received(const std::string& path);

}  // namespace skyrx
