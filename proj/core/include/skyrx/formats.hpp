#pragma once

// On-disk formats for cubes (.hsc), ground-truth masks (.hsm), INS tracks
// (.hst) and calibration tables (.hsk). All integers little-endian.
//
// .hsc  "HSC1" u16 version u16 dtype(0=u16,1=f32) u32 lines u32 samples u32 bands
//       f32 wavelengths[bands], 96-byte LineMeta[lines], payload (BIP order)
// .hsm  "HSM1" u32 lines u32 samples, packed bits (LSB first, row-major)
// .hst  "HST1" u32 count, 40-byte InsSample[count]
// .hsk  "HSK1" u32 samples u32 bands, f32 dark[samples*bands], f32 coeff[samples*bands]

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "skyrx/binary_io.hpp"
#include "skyrx/cube.hpp"

namespace skyrx {

inline constexpr std::uint16_t kCubeFormatVersion = 1;
inline constexpr std::size_t kInsRecordBytes = 40;
inline constexpr std::size_t kLineMetaRecordBytes = 96;

enum class CubeDtype : std::uint16_t { Raw16 = 0, Float32 = 1 };

// Per-(sample, band) radiometric tables. Index = sample * bands + band.
struct CalibrationTables {
    std::uint32_t samples = 0;
    std::uint32_t bands = 0;
    std::vector<float> dark;
    std::vector<float> coeff;

    bool operator==(const CalibrationTables&) const = default;
};

using AnyCube = std::variant<RawCube, RadianceCube>;

void put_ins(ByteWriter& w, const InsSample& s);
InsSample get_ins(ByteReader& r);
void put_line_meta(ByteWriter& w, const LineMeta& m);
LineMeta get_line_meta(ByteReader& r);

std::vector<std::uint8_t> encode_cube(const RawCube& cube);
std::vector<std::uint8_t> encode_cube(const RadianceCube& cube);
AnyCube decode_cube(std::span<const std::uint8_t> bytes);

void write_cube(const std::string& path, const RawCube& cube);
void write_cube(const std::string& path, const RadianceCube& cube);
// Streams the cube without materialising the whole encoding in memory.
void write_cube(std::ostream& out, const RawCube& cube);
AnyCube read_cube(const std::string& path);
RawCube read_raw_cube(const std::string& path);

std::vector<std::uint8_t> encode_mask(const GroundTruthMask& mask);
GroundTruthMask decode_mask(std::span<const std::uint8_t> bytes);
void write_mask(const std::string& path, const GroundTruthMask& mask);
GroundTruthMask read_mask(const std::string& path);

std::vector<std::uint8_t> encode_track(const std::vector<InsSample>& track);
std::vector<InsSample> decode_track(std::span<const std::uint8_t> bytes);
void write_track(const std::string& path, const std::vector<InsSample>& track);
std::vector<InsSample> read_track(const std::string& path);

std::vector<std::uint8_t> encode_tables(const CalibrationTables& tables);
CalibrationTables decode_tables(std::span<const std::uint8_t> bytes);
void write_tables(const std::string& path, const CalibrationTables& tables);
CalibrationTables read_tables(const std::string& path);

}  // namespace skyrx
