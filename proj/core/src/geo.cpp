#include "skyrx/geo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace skyrx {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

double lerp_angle(double a0, double a1, double f) noexcept {
    const double d = wrap_degrees(a1 - a0);
    return wrap_degrees(a0 + d * f);
}

}  // namespace

LocalPoint to_local(const GeoOrigin& origin, double lat, double lon) noexcept {
    const double east = kEarthRadiusM * std::cos(origin.lat * kDeg) * (lon - origin.lon) * kDeg;
    const double north = kEarthRadiusM * (lat - origin.lat) * kDeg;
    return {east, north};
}

void to_geodetic(const GeoOrigin& origin, double east, double north, double& lat, double& lon) noexcept {
    lat = origin.lat + north / kEarthRadiusM / kDeg;
    lon = origin.lon + east / (kEarthRadiusM * std::cos(origin.lat * kDeg)) / kDeg;
}

Pose pose_from_ins(const InsSample& s, const GeoOrigin& origin) {
    const LocalPoint p = to_local(origin, s.lat, s.lon);
    return {p.east, p.north, s.alt, s.roll, s.pitch, s.yaw, s.timestamp_us};
}

Pose interpolate_pose(const InsSample& before, const InsSample& after, std::uint64_t t_us, const GeoOrigin& origin) {
    if (before.timestamp_us > after.timestamp_us || t_us < before.timestamp_us || t_us > after.timestamp_us) {
        throw InvalidInput("interpolate_pose: time " + std::to_string(t_us) + " outside INS bracket [" +
                           std::to_string(before.timestamp_us) + ", " + std::to_string(after.timestamp_us) + "]");
    }
    const Pose a = pose_from_ins(before, origin);
    if (after.timestamp_us == before.timestamp_us) {
        Pose out = a;
        out.time_us = t_us;
        return out;
    }
    const Pose b = pose_from_ins(after, origin);
    const double f = static_cast<double>(t_us - before.timestamp_us) /
                     static_cast<double>(after.timestamp_us - before.timestamp_us);
    Pose out;
    out.east = a.east + (b.east - a.east) * f;
    out.north = a.north + (b.north - a.north) * f;
    out.alt = a.alt + (b.alt - a.alt) * f;
    out.roll = lerp_angle(a.roll, b.roll, f);
    out.pitch = lerp_angle(a.pitch, b.pitch, f);
    out.yaw = lerp_angle(a.yaw, b.yaw, f);
    out.time_us = t_us;
    return out;
}

double sample_angle_deg(std::uint32_t sample, const CameraModel& camera) noexcept {
    if (camera.samples < 2) return 0.0;
    return camera.fov_deg * (static_cast<double>(sample) / (camera.samples - 1) - 0.5);
}

std::vector<GroundPoint> project_line(const Pose& pose, const CameraModel& camera, double ground_alt) {
    if (!(camera.fov_deg > 0.0 && camera.fov_deg < 180.0)) {
        throw InvalidInput("project_line: field of view must lie in (0, 180) degrees");
    }
    std::vector<GroundPoint> out(camera.samples);
    const double height = pose.alt - ground_alt;
    if (!(height > 0.0)) return out;

    // Body frame: x forward, y starboard, z down. World frame: north, east, down.
    // R = Rz(yaw) * Ry(pitch) * Rx(roll).
    const double cr = std::cos(pose.roll * kDeg), sr = std::sin(pose.roll * kDeg);
    const double cp = std::cos(pose.pitch * kDeg), sp = std::sin(pose.pitch * kDeg);
    const double cy = std::cos(pose.yaw * kDeg), sy = std::sin(pose.yaw * kDeg);
    // The body ray has no forward component, so the first column is unused.
    const double r01 = cy * sp * sr - sy * cr, r02 = cy * sp * cr + sy * sr;
    const double r11 = sy * sp * sr + cy * cr, r12 = sy * sp * cr - cy * sr;
    const double r21 = cp * sr, r22 = cp * cr;

    for (std::uint32_t j = 0; j < camera.samples; ++j) {
        const double theta = sample_angle_deg(j, camera) * kDeg;
        const double by = std::sin(theta), bz = std::cos(theta);
        const double vn = r01 * by + r02 * bz;
        const double ve = r11 * by + r12 * bz;
        const double vd = r21 * by + r22 * bz;
        if (vd <= 1e-12) continue;
        const double t = height / vd;
        out[j] = {pose.east + t * ve, pose.north + t * vn, true};
    }
    return out;
}

std::optional<std::size_t> Raster::locate(double east, double north) const noexcept {
    if (empty()) return std::nullopt;
    const double c = std::floor((east - origin_east) / gsd);
    const double r = std::floor((origin_north - north) / gsd);
    if (c < 0 || r < 0 || c >= width || r >= height) return std::nullopt;
    return cell(static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c));
}

std::size_t Raster::valid_count() const noexcept {
    return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), std::uint8_t{1}));
}

double median_sample_spacing(std::span<const LineSplat> lines) {
    std::vector<double> spacing;
    for (const auto& line : lines) {
        for (std::size_t j = 1; j < line.points.size(); ++j) {
            const auto& a = line.points[j - 1];
            const auto& b = line.points[j];
            if (a.valid && b.valid) spacing.push_back(std::hypot(b.east - a.east, b.north - a.north));
        }
    }
    if (spacing.empty()) return 0.0;
    auto mid = spacing.begin() + static_cast<std::ptrdiff_t>(spacing.size() / 2);
    std::nth_element(spacing.begin(), mid, spacing.end());
    return *mid;
}

Raster rasterize(std::span<const LineSplat> lines, std::optional<double> gsd) {
    double min_e = std::numeric_limits<double>::infinity(), max_e = -min_e;
    double min_n = min_e, max_n = -min_e;
    for (const auto& line : lines) {
        for (const auto& p : line.points) {
            if (!p.valid) continue;
            min_e = std::min(min_e, p.east);
            max_e = std::max(max_e, p.east);
            min_n = std::min(min_n, p.north);
            max_n = std::max(max_n, p.north);
        }
    }
    if (!(min_e <= max_e)) {
        throw InvalidInput("rasterize: no valid projected points");
    }
    double cell = gsd.value_or(0.0);
    if (!gsd) {
        cell = median_sample_spacing(lines);
        if (!(cell > 0.0)) cell = 1.0;
    }
    if (!(cell > 0.0)) {
        throw InvalidInput("rasterize: gsd must be > 0");
    }

    Raster r;
    r.gsd = cell;
    // Snap the grid to multiples of gsd so rebuilt mosaics stay aligned.
    r.origin_east = std::floor(min_e / cell) * cell;
    r.origin_north = std::ceil(max_n / cell) * cell;
    r.width = static_cast<std::uint32_t>(std::floor((max_e - r.origin_east) / cell)) + 1;
    r.height = static_cast<std::uint32_t>(std::floor((r.origin_north - min_n) / cell)) + 1;
    const std::size_t n = static_cast<std::size_t>(r.width) * r.height;
    r.rgb.assign(3 * n, 0.0f);
    r.score.assign(n, 0.0f);
    r.valid.assign(n, 0);

    for (const auto& line : lines) {
        for (std::size_t j = 0; j < line.points.size(); ++j) {
            const auto& p = line.points[j];
            if (!p.valid) continue;
            const auto idx = r.locate(p.east, p.north);
            if (!idx) continue;
            r.valid[*idx] = 1;
            r.score[*idx] = line.score[j];
            r.rgb[3 * *idx + 0] = line.rgb[3 * j + 0];
            r.rgb[3 * *idx + 1] = line.rgb[3 * j + 1];
            r.rgb[3 * *idx + 2] = line.rgb[3 * j + 2];
        }
    }
    return r;
}

}  // namespace skyrx
