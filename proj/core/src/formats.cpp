#include "skyrx/formats.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <ostream>

namespace skyrx {

static_assert(std::endian::native == std::endian::little,
              "payload copies assume a little-endian host");

namespace {

constexpr std::size_t kCubeHeaderBytes = 4 + 2 + 2 + 4 * 3;

template <typename T>
constexpr CubeDtype dtype_of();
template <>
constexpr CubeDtype dtype_of<std::uint16_t>() { return CubeDtype::Raw16; }
template <>
constexpr CubeDtype dtype_of<float>() { return CubeDtype::Float32; }

template <typename T>
void put_cube_header(ByteWriter& w, const Cube<T>& cube) {
    w.tag("HSC1");
    w.u16(kCubeFormatVersion);
    w.u16(static_cast<std::uint16_t>(dtype_of<T>()));
    w.u32(cube.lines());
    w.u32(cube.samples());
    w.u32(cube.bands());
    for (float wl : cube.wavelengths()) w.f32(wl);
    for (const LineMeta& m : cube.line_meta()) put_line_meta(w, m);
}

template <typename T>
std::vector<std::uint8_t> encode_cube_impl(const Cube<T>& cube) {
    std::vector<std::uint8_t> out;
    const std::size_t payload = cube.values().size() * sizeof(T);
    out.reserve(kCubeHeaderBytes + cube.bands() * 4 + cube.lines() * kLineMetaRecordBytes + payload);
    ByteWriter w(out);
    put_cube_header(w, cube);
    const std::size_t at = out.size();
    out.resize(at + payload);
    std::memcpy(out.data() + at, cube.values().data(), payload);
    return out;
}

template <typename T>
Cube<T> decode_cube_body(ByteReader& r, std::uint32_t lines, std::uint32_t samples, std::uint32_t bands) {
    Cube<T> cube(lines, samples, bands);
    for (auto& wl : cube.wavelengths()) wl = r.f32();
    for (auto& m : cube.line_meta()) m = get_line_meta(r);
    const std::size_t payload = cube.values().size() * sizeof(T);
    auto bytes = r.bytes(payload);
    std::memcpy(cube.values().data(), bytes.data(), payload);
    return cube;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    return out;
}

}  // namespace

void put_ins(ByteWriter& w, const InsSample& s) {
    w.u64(s.timestamp_us);
    w.f64(s.lat);
    w.f64(s.lon);
    w.f32(s.alt);
    w.f32(s.roll);
    w.f32(s.pitch);
    w.f32(s.yaw);
}

InsSample get_ins(ByteReader& r) {
    InsSample s;
    s.timestamp_us = r.u64();
    s.lat = r.f64();
    s.lon = r.f64();
    s.alt = r.f32();
    s.roll = r.f32();
    s.pitch = r.f32();
    s.yaw = r.f32();
    return s;
}

void put_line_meta(ByteWriter& w, const LineMeta& m) {
    w.u64(m.exposure_start_us);
    w.f64(m.gain);
    put_ins(w, m.ins_before);
    put_ins(w, m.ins_after);
}

LineMeta get_line_meta(ByteReader& r) {
    LineMeta m;
    m.exposure_start_us = r.u64();
    m.gain = r.f64();
    m.ins_before = get_ins(r);
    m.ins_after = get_ins(r);
    return m;
}

std::vector<std::uint8_t> encode_cube(const RawCube& cube) { return encode_cube_impl(cube); }
std::vector<std::uint8_t> encode_cube(const RadianceCube& cube) { return encode_cube_impl(cube); }

AnyCube decode_cube(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_tag("HSC1", "cube");
    const std::size_t version_at = r.offset();
    const std::uint16_t version = r.u16();
    if (version != kCubeFormatVersion) {
        throw FormatError("cube: unsupported version " + std::to_string(version), version_at);
    }
    const std::size_t dtype_at = r.offset();
    const std::uint16_t dtype = r.u16();
    const std::uint32_t lines = r.u32();
    const std::uint32_t samples = r.u32();
    const std::uint32_t bands = r.u32();
    switch (static_cast<CubeDtype>(dtype)) {
        case CubeDtype::Raw16: return decode_cube_body<std::uint16_t>(r, lines, samples, bands);
        case CubeDtype::Float32: return decode_cube_body<float>(r, lines, samples, bands);
    }
    throw FormatError("cube: unknown dtype " + std::to_string(dtype), dtype_at);
}

void write_cube(const std::string& path, const RawCube& cube) {
    auto out = open_out(path);
    write_cube(out, cube);
}

void write_cube(const std::string& path, const RadianceCube& cube) {
    write_file_bytes(path, encode_cube(cube));
}

void write_cube(std::ostream& out, const RawCube& cube) {
    std::vector<std::uint8_t> header;
    ByteWriter w(header);
    put_cube_header(w, cube);
    out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
    out.write(reinterpret_cast<const char*>(cube.values().data()),
              static_cast<std::streamsize>(cube.values().size() * sizeof(std::uint16_t)));
    if (!out) throw std::runtime_error("cube write failed");
}

AnyCube read_cube(const std::string& path) { return decode_cube(read_file_bytes(path)); }

RawCube read_raw_cube(const std::string& path) {
    AnyCube any = read_cube(path);
    if (auto* raw = std::get_if<RawCube>(&any)) return std::move(*raw);
    throw FormatError("cube: " + path + " holds radiance, expected raw u16", 6);
}

std::vector<std::uint8_t> encode_mask(const GroundTruthMask& mask) {
    std::vector<std::uint8_t> out;
    ByteWriter w(out);
    w.tag("HSM1");
    w.u32(mask.lines);
    w.u32(mask.samples);
    const std::size_t n = static_cast<std::size_t>(mask.lines) * mask.samples;
    std::vector<std::uint8_t> packed((n + 7) / 8, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (mask.values[i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    }
    w.bytes(packed);
    return out;
}

GroundTruthMask decode_mask(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_tag("HSM1", "mask");
    const std::uint32_t lines = r.u32();
    const std::uint32_t samples = r.u32();
    GroundTruthMask mask(lines, samples);
    const std::size_t n = mask.values.size();
    auto packed = r.bytes((n + 7) / 8);
    for (std::size_t i = 0; i < n; ++i) {
        mask.values[i] = (packed[i / 8] >> (i % 8)) & 1u;
    }
    return mask;
}

void write_mask(const std::string& path, const GroundTruthMask& mask) { write_file_bytes(path, encode_mask(mask)); }
GroundTruthMask read_mask(const std::string& path) { return decode_mask(read_file_bytes(path)); }

std::vector<std::uint8_t> encode_track(const std::vector<InsSample>& track) {
    std::vector<std::uint8_t> out;
    ByteWriter w(out);
    w.tag("HST1");
    w.u32(static_cast<std::uint32_t>(track.size()));
    for (const auto& s : track) put_ins(w, s);
    return out;
}

std::vector<InsSample> decode_track(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_tag("HST1", "track");
    const std::uint32_t count = r.u32();
    std::vector<InsSample> track;
    track.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) track.push_back(get_ins(r));
    std::stable_sort(track.begin(), track.end(),
                     [](const InsSample& a, const InsSample& b) { return a.timestamp_us < b.timestamp_us; });
    return track;
}

void write_track(const std::string& path, const std::vector<InsSample>& track) {
    write_file_bytes(path, encode_track(track));
}
std::vector<InsSample> read_track(const std::string& path) { return decode_track(read_file_bytes(path)); }

std::vector<std::uint8_t> encode_tables(const CalibrationTables& tables) {
    std::vector<std::uint8_t> out;
    ByteWriter w(out);
    w.tag("HSK1");
    w.u32(tables.samples);
    w.u32(tables.bands);
    for (float v : tables.dark) w.f32(v);
    for (float v : tables.coeff) w.f32(v);
    return out;
}

CalibrationTables decode_tables(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_tag("HSK1", "calibration tables");
    CalibrationTables t;
    t.samples = r.u32();
    t.bands = r.u32();
    const std::size_t n = static_cast<std::size_t>(t.samples) * t.bands;
    t.dark.resize(n);
    t.coeff.resize(n);
    for (auto& v : t.dark) v = r.f32();
    for (auto& v : t.coeff) v = r.f32();
    return t;
}

void write_tables(const std::string& path, const CalibrationTables& tables) {
    write_file_bytes(path, encode_tables(tables));
}
CalibrationTables read_tables(const std::string& path) { return decode_tables(read_file_bytes(path)); }

}  // namespace skyrx
