#include "skyrx/packet.hpp"

#include <algorithm>
#include <cmath>

#include "skyrx/binary_io.hpp"
#include "skyrx/formats.hpp"
#include "skyrx/half.hpp"

namespace skyrx {

std::size_t packet_size(std::uint32_t samples) noexcept { return kHeaderBytes + kBytesPerPixel * samples; }

std::uint16_t quantize_channel(float value, float max, int bits) noexcept {
    if (!(max > 0.0f) || !(value > 0.0f)) return 0;
    const double levels = static_cast<double>((1u << bits) - 1u);
    const double q = std::floor(static_cast<double>(value) / max * levels + 0.5);
    return static_cast<std::uint16_t>(std::clamp(q, 0.0, levels));
}

std::uint16_t pack_rgb565(float r, float g, float b, float max_r, float max_g, float max_b) noexcept {
    return static_cast<std::uint16_t>((quantize_channel(r, max_r, 5) << 11) | (quantize_channel(g, max_g, 6) << 5) |
                                      quantize_channel(b, max_b, 5));
}

LinePacket encode_line(std::span<const float> rgb, std::span<const float> scores, const PacketHeader& h) {
    if (scores.size() != h.samples || rgb.size() != 3 * static_cast<std::size_t>(h.samples)) {
        throw InvalidInput("encode_line: rows have " + std::to_string(scores.size()) + " scores / " +
                           std::to_string(rgb.size()) + " colors, header says " + std::to_string(h.samples) +
                           " samples");
    }
    if (h.line_index >= h.lines_per_cube) throw InvalidInput("encode_line: line_index >= lines_per_cube");

    LinePacket out;
    out.reserve(packet_size(h.samples));
    ByteWriter w(out);
    w.tag("SKRX");
    w.u16(kPacketVersion);
    w.u16(static_cast<std::uint16_t>(kHeaderBytes));
    w.u32(h.cube_id);
    w.u32(h.line_index);
    w.u32(h.lines_per_cube);
    w.u32(h.samples);
    w.u64(h.exposure_start_us);
    w.f32(h.max_score);
    w.f32(h.max_r);
    w.f32(h.max_g);
    w.f32(h.max_b);
    put_ins(w, h.ins_before);
    put_ins(w, h.ins_after);

    for (std::uint32_t s = 0; s < h.samples; ++s) {
        w.u16(pack_rgb565(rgb[3 * s], rgb[3 * s + 1], rgb[3 * s + 2], h.max_r, h.max_g, h.max_b));
        float v = 0.0f;
        if (h.max_score > 0.0f && scores[s] > 0.0f) v = std::sqrt(std::min(1.0f, scores[s] / h.max_score));
        w.u16(float_to_half(v));
    }
    return out;
}

PacketHeader decode_header(std::span<const std::uint8_t> packet) {
    ByteReader r(packet);
    r.expect_tag("SKRX", "packet");
    const std::size_t at = r.offset();
    const std::uint16_t version = r.u16();
    if (version != kPacketVersion) throw FormatError("packet: unsupported version " + std::to_string(version), at);
    const std::uint16_t header_len = r.u16();
    if (header_len != kHeaderBytes) throw FormatError("packet: header_len " + std::to_string(header_len), at + 2);
    PacketHeader h;
    h.cube_id = r.u32();
    h.line_index = r.u32();
    h.lines_per_cube = r.u32();
    h.samples = r.u32();
    h.exposure_start_us = r.u64();
    h.max_score = r.f32();
    h.max_r = r.f32();
    h.max_g = r.f32();
    h.max_b = r.f32();
    h.ins_before = get_ins(r);
    h.ins_after = get_ins(r);
    if (packet.size() != packet_size(h.samples)) {
        throw FormatError("packet: length " + std::to_string(packet.size()) + " != " +
                              std::to_string(packet_size(h.samples)) + " for " + std::to_string(h.samples) +
                              " samples",
                          0);
    }
    if (h.line_index >= h.lines_per_cube) throw FormatError("packet: line_index >= lines_per_cube", 12);
    return h;
}

DecodedLine decode_line(std::span<const std::uint8_t> packet) {
    DecodedLine out;
    out.header = decode_header(packet);
    const PacketHeader& h = out.header;
    out.rgb.resize(3 * static_cast<std::size_t>(h.samples));
    out.scores.resize(h.samples);
    out.display.resize(h.samples);
    ByteReader r(packet.subspan(kHeaderBytes), kHeaderBytes);
    for (std::uint32_t s = 0; s < h.samples; ++s) {
        const std::uint16_t c = r.u16();
        out.rgb[3 * s + 0] = static_cast<float>((c >> 11) & 0x1F) / 31.0f * h.max_r;
        out.rgb[3 * s + 1] = static_cast<float>((c >> 5) & 0x3F) / 63.0f * h.max_g;
        out.rgb[3 * s + 2] = static_cast<float>(c & 0x1F) / 31.0f * h.max_b;
        const float v = half_to_float(r.u16());
        out.display[s] = v;
        out.scores[s] = v * v * h.max_score;
    }
    return out;
}

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
    if (frame.payload.size() > 0xFFFF) throw InvalidInput("encode_frame: payload exceeds 65535 bytes");
    std::vector<std::uint8_t> out;
    out.reserve(kFrameHeaderBytes + frame.payload.size());
    ByteWriter w(out);
    w.u32(frame.group_id);
    w.u8(frame.index);
    w.u8(static_cast<std::uint8_t>(frame.kind));
    w.u16(static_cast<std::uint16_t>(frame.payload.size()));
    w.bytes(frame.payload);
    return out;
}

Frame decode_frame(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    Frame f;
    f.group_id = r.u32();
    f.index = r.u8();
    const std::uint8_t kind = r.u8();
    if (kind > 1) throw FormatError("frame: unknown kind " + std::to_string(kind), 5);
    f.kind = static_cast<FrameKind>(kind);
    const std::uint16_t len = r.u16();
    if (r.remaining() != len) {
        throw FormatError("frame: payload_len " + std::to_string(len) + " but " + std::to_string(r.remaining()) +
                              " bytes follow",
                          6);
    }
    auto payload = r.bytes(len);
    f.payload.assign(payload.begin(), payload.end());
    return f;
}

LinkBudget link_budget(double line_rate_hz, std::uint32_t samples, std::uint32_t data_per_group,
                       std::uint32_t parity_per_group) {
    LinkBudget b;
    const double packet = static_cast<double>(packet_size(samples));
    b.payload_mbps = line_rate_hz * samples * kBytesPerPixel * 8.0 / 1e6;
    b.packets_mbps = line_rate_hz * packet * 8.0 / 1e6;
    const double overhead = static_cast<double>(data_per_group + parity_per_group) / data_per_group;
    b.total_mbps = line_rate_hz * overhead * (packet + kFrameHeaderBytes) * 8.0 / 1e6;
    return b;
}

}  // namespace skyrx
