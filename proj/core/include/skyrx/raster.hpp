#pragma once

// Raster export: PNG encoding, raw f32 grids with a text sidecar, and the
// tile renderer behind the map service.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skyrx/geo.hpp"

namespace skyrx {

std::vector<std::uint8_t> encode_png_rgb8(std::uint32_t width, std::uint32_t height,
                                          std::span<const std::uint8_t> rgb);
std::vector<std::uint8_t> encode_png_gray8(std::uint32_t width, std::uint32_t height,
                                           std::span<const std::uint8_t> gray);
std::vector<std::uint8_t> encode_png_gray16(std::uint32_t width, std::uint32_t height,
                                            std::span<const std::uint16_t> gray);

struct PngImage {
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    int channels = 0;
    int bit_depth = 0;
    std::vector<std::uint16_t> samples;  // row-major, channel-interleaved
};

// Reader used by tests and tools to inspect what was written.
PngImage decode_png(std::span<const std::uint8_t> png);

struct ChannelMax {
    float r = 0.0f, g = 0.0f, b = 0.0f;
};
ChannelMax raster_channel_max(const Raster& raster);

// 8-bit color scaled by the per-channel maxima; invalid cells are black.
std::vector<std::uint8_t> raster_rgb8(const Raster& raster, const ChannelMax& max);
// 16-bit grayscale of the sqrt-normalized score; invalid cells are 0.
std::vector<std::uint16_t> raster_score16(const Raster& raster);

void write_raster_png(const std::string& path, const Raster& raster);
void write_score_png(const std::string& path, const Raster& raster);

// Writes <base>.f32 (score, then R, G, B, then valid as 0/1 planes, row-major)
// and <base>.txt with origin, gsd and size.
void export_raster_f32(const std::string& base, const Raster& raster);

struct BoundingBox {
    double east0 = 0.0, north0 = 0.0, east1 = 0.0, north1 = 0.0;

    bool valid() const noexcept { return east1 > east0 && north1 > north0; }
};

BoundingBox raster_bounds(const Raster& raster) noexcept;

enum class TileMode { Rgb, Score };

// Samples the raster at the center of each tile pixel. Areas outside the
// raster render as invalid (black / zero) rather than failing.
std::vector<std::uint8_t> render_tile(const Raster& raster, TileMode mode, const BoundingBox& bbox,
                                      std::uint32_t width, std::uint32_t height, const ChannelMax& max);

}  // namespace skyrx
