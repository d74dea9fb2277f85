#pragma once

// Flat-ground georectification: pose interpolation between INS fixes,
// per-line ray projection, and nearest-cell splatting into a north-up raster.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "skyrx/cube.hpp"

namespace skyrx {

inline constexpr double kEarthRadiusM = 6378137.0;

// Local tangent frame anchor. East/north are meters from this point.
struct GeoOrigin {
    double lat = 35.1175;
    double lon = -89.9711;
};

struct LocalPoint {
    double east = 0.0;
    double north = 0.0;
};

LocalPoint to_local(const GeoOrigin& origin, double lat, double lon) noexcept;
void to_geodetic(const GeoOrigin& origin, double east, double north, double& lat, double& lon) noexcept;

struct CameraModel {
    std::uint32_t samples = kDefaultSamples;
    double fov_deg = 47.5;
};

struct Pose {
    double east = 0.0;
    double north = 0.0;
    double alt = 0.0;
    double roll = 0.0;
    double pitch = 0.0;
    double yaw = 0.0;
    std::uint64_t time_us = 0;
};

Pose pose_from_ins(const InsSample& s, const GeoOrigin& origin);

// Linear in position; each attitude axis follows the shortest arc.
Pose interpolate_pose(const InsSample& before, const InsSample& after, std::uint64_t t_us, const GeoOrigin& origin);

struct GroundPoint {
    double east = 0.0;
    double north = 0.0;
    bool valid = false;
};

// Across-track look angle of sample j in degrees; positive looks to starboard.
double sample_angle_deg(std::uint32_t sample, const CameraModel& camera) noexcept;

// Intersects every sample ray with the plane alt = ground_alt. Samples whose
// ray never reaches the plane are returned with valid = false.
std::vector<GroundPoint> project_line(const Pose& pose, const CameraModel& camera, double ground_alt = 0.0);

// One projected line with the values to splat; rgb holds 3 floats per sample.
struct LineSplat {
    std::vector<GroundPoint> points;
    std::vector<float> rgb;
    std::vector<float> score;
};

struct Raster {
    double origin_east = 0.0;   // west edge
    double origin_north = 0.0;  // north edge
    double gsd = 0.0;
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    std::vector<float> rgb;             // 3 per cell
    std::vector<float> score;           // 1 per cell
    std::vector<std::uint8_t> valid;    // 1 per cell

    std::size_t cell(std::uint32_t row, std::uint32_t col) const noexcept {
        return static_cast<std::size_t>(row) * width + col;
    }
    LocalPoint cell_center(std::uint32_t row, std::uint32_t col) const noexcept {
        return {origin_east + (col + 0.5) * gsd, origin_north - (row + 0.5) * gsd};
    }
    // Cell containing a ground point, if inside the raster.
    std::optional<std::size_t> locate(double east, double north) const noexcept;
    std::size_t valid_count() const noexcept;
    bool empty() const noexcept { return width == 0 || height == 0; }
};

// Median distance between adjacent valid samples over all lines.
double median_sample_spacing(std::span<const LineSplat> lines);

// Nearest-cell splat, later lines overwrite earlier ones. gsd defaults to the
// median along-line spacing. Throws InvalidInput when no valid point exists.
Raster rasterize(std::span<const LineSplat> lines, std::optional<double> gsd = std::nullopt);

}  // namespace skyrx
