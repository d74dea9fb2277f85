#pragma once

// Over-the-air line packet: 128-byte header followed by 4 bytes per pixel
// (RGB565 color, then the half-precision square-rooted normalized score).
//
// Header byte offsets (little-endian):
//   0  magic "SKRX"        4  version u16 = 1     6  header_len u16 = 128
//   8  cube_id u32        12  line_index u32     16  lines_per_cube u32
//  20  samples u32        24  exposure_start u64 (us)
//  32  max_score f32      36  max_R f32  40  max_G f32  44  max_B f32
//  48  ins_before (u64 ts, f64 lat, f64 lon, f32 alt, f32 roll, f32 pitch, f32 yaw)
//  88  ins_after  (same layout)

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "skyrx/cube.hpp"

namespace skyrx {

inline constexpr std::size_t kHeaderBytes = 128;
inline constexpr std::size_t kBytesPerPixel = 4;
inline constexpr std::size_t kPacketBytes = kHeaderBytes + kDefaultSamples * kBytesPerPixel;  // 3728
inline constexpr std::uint16_t kPacketVersion = 1;

using LinePacket = std::vector<std::uint8_t>;

struct PacketHeader {
    std::uint32_t cube_id = 0;
    std::uint32_t line_index = 0;
    std::uint32_t lines_per_cube = kDefaultLines;
    std::uint32_t samples = kDefaultSamples;
    std::uint64_t exposure_start_us = 0;
    float max_score = 0.0f;
    float max_r = 0.0f;
    float max_g = 0.0f;
    float max_b = 0.0f;
    InsSample ins_before;
    InsSample ins_after;

    bool operator==(const PacketHeader&) const = default;
};

std::size_t packet_size(std::uint32_t samples) noexcept;

// Round-half-up quantization of value / max onto `bits` bits.
std::uint16_t quantize_channel(float value, float max, int bits) noexcept;
std::uint16_t pack_rgb565(float r, float g, float b, float max_r, float max_g, float max_b) noexcept;

// rgb holds 3 floats per sample; scores are raw RX deltas.
LinePacket encode_line(std::span<const float> rgb, std::span<const float> scores, const PacketHeader& header);

struct DecodedLine {
    PacketHeader header;
    std::vector<float> rgb;      // 3 per sample, radiance units
    std::vector<float> scores;   // delta' = half^2 * max_score
    std::vector<float> display;  // transmitted sqrt(delta / max) in [0, 1]
};

PacketHeader decode_header(std::span<const std::uint8_t> packet);
DecodedLine decode_line(std::span<const std::uint8_t> packet);

// Outer framing that carries packets and parity over the link.
enum class FrameKind : std::uint8_t { Data = 0, Parity = 1 };

inline constexpr std::size_t kFrameHeaderBytes = 8;

struct Frame {
    std::uint32_t group_id = 0;
    std::uint8_t index = 0;  // 0..k-1 data, k..k+m-1 parity
    FrameKind kind = FrameKind::Data;
    std::vector<std::uint8_t> payload;

    bool operator==(const Frame&) const = default;
};

std::vector<std::uint8_t> encode_frame(const Frame& frame);
Frame decode_frame(std::span<const std::uint8_t> bytes);

// Link rates implied by the packet layout, in Mbit/s.
struct LinkBudget {
    double payload_mbps = 0.0;   // pixel data only
    double packets_mbps = 0.0;   // data packets with header
    double total_mbps = 0.0;     // plus parity and outer framing
};

LinkBudget link_budget(double line_rate_hz = kLineRateHz, std::uint32_t samples = kDefaultSamples,
                       std::uint32_t data_per_group = 50, std::uint32_t parity_per_group = 25);

}  // namespace skyrx
