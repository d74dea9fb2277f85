#include "skyrx/cube.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace skyrx {

std::size_t GroundTruthMask::count() const noexcept {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](std::uint8_t v) { return v != 0; }));
}

std::size_t band_nearest(std::span<const float> wavelengths, double target_nm) {
    if (wavelengths.empty()) {
        throw InvalidInput("band_nearest: empty wavelength list");
    }
    // Binary search on the sorted grid, then compare the two neighbours.
    auto it = std::lower_bound(wavelengths.begin(), wavelengths.end(), target_nm,
                               [](float w, double t) { return static_cast<double>(w) < t; });
    if (it == wavelengths.begin()) return 0;
    if (it == wavelengths.end()) return wavelengths.size() - 1;
    const std::size_t hi = static_cast<std::size_t>(it - wavelengths.begin());
    const std::size_t lo = hi - 1;
    const double dlo = std::abs(static_cast<double>(wavelengths[lo]) - target_nm);
    const double dhi = std::abs(static_cast<double>(wavelengths[hi]) - target_nm);
    return dhi < dlo ? hi : lo;
}

double wrap_degrees(double deg) noexcept {
    double r = std::fmod(deg + 180.0, 360.0);
    if (r < 0.0) r += 360.0;
    return r - 180.0;
}

namespace {

void check_ins(const InsSample& s, const std::string& name, std::size_t line, std::vector<Violation>& out) {
    const std::string where = "line_meta[" + std::to_string(line) + "]." + name;
    if (!(s.lat >= -90.0 && s.lat <= 90.0)) out.push_back({where + ".lat", "outside [-90, 90]"});
    if (!(s.lon >= -180.0 && s.lon <= 180.0)) out.push_back({where + ".lon", "outside [-180, 180]"});
    const auto angle_ok = [](float a) { return a >= -180.0f && a < 180.0f; };
    if (!angle_ok(s.roll)) out.push_back({where + ".roll", "outside [-180, 180)"});
    if (!angle_ok(s.pitch)) out.push_back({where + ".pitch", "outside [-180, 180)"});
    if (!angle_ok(s.yaw)) out.push_back({where + ".yaw", "outside [-180, 180)"});
}

template <typename T>
void validate_common(const Cube<T>& cube, std::vector<Violation>& out) {
    const std::size_t expected = cube.pixel_count() * cube.bands();
    if (cube.values().size() != expected) {
        out.push_back({"values", "length " + std::to_string(cube.values().size()) + " != lines*samples*bands " +
                                     std::to_string(expected)});
    }
    const auto& wl = cube.wavelengths();
    if (wl.size() != cube.bands()) {
        out.push_back({"wavelengths", "length " + std::to_string(wl.size()) + " != bands " +
                                          std::to_string(cube.bands())});
    }
    for (std::size_t i = 1; i < wl.size(); ++i) {
        if (!(wl[i] > wl[i - 1])) {
            out.push_back({"wavelengths", "not strictly increasing at index " + std::to_string(i)});
            break;
        }
    }
    const auto& meta = cube.line_meta();
    if (meta.size() != cube.lines()) {
        out.push_back({"line_meta", "length " + std::to_string(meta.size()) + " != lines " +
                                        std::to_string(cube.lines())});
    }
    for (std::size_t l = 0; l < meta.size(); ++l) {
        const LineMeta& m = meta[l];
        if (!(m.gain > 0.0)) {
            out.push_back({"line_meta[" + std::to_string(l) + "].gain", "must be > 0"});
        }
        if (!(m.ins_before.timestamp_us <= m.exposure_start_us && m.exposure_start_us <= m.ins_after.timestamp_us)) {
            out.push_back({"line_meta[" + std::to_string(l) + "].exposure_start",
                           "not bracketed by ins_before/ins_after timestamps"});
        }
        check_ins(m.ins_before, "ins_before", l, out);
        check_ins(m.ins_after, "ins_after", l, out);
    }
}

}  // namespace

std::vector<Violation> cube_validate(const RawCube& cube) {
    std::vector<Violation> out;
    validate_common(cube, out);
    return out;
}

std::vector<Violation> cube_validate(const RadianceCube& cube) {
    std::vector<Violation> out;
    validate_common(cube, out);
    for (std::size_t i = 0; i < cube.values().size(); ++i) {
        const float v = cube.values()[i];
        if (!std::isfinite(v) || v < 0.0f) {
            out.push_back({"values", "non-finite or negative radiance at flat index " + std::to_string(i)});
            break;
        }
    }
    return out;
}

}  // namespace skyrx
