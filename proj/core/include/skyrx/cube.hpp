#pragma once

// Hyperspectral cube data model shared by every stage of the air and ground
// pipelines. Cubes are stored band-interleaved-by-pixel: all bands of one
// pixel are contiguous, pixels are ordered sample-major within a line.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "skyrx/errors.hpp"

namespace skyrx {

inline constexpr std::uint32_t kDefaultLines = 1000;
inline constexpr std::uint32_t kDefaultSamples = 900;
inline constexpr std::uint32_t kDefaultBands = 300;
inline constexpr double kLineRateHz = 249.0;

// One INS fix. Altitude is meters above a flat ground datum; angles in degrees.
struct InsSample {
    std::uint64_t timestamp_us = 0;
    double lat = 0.0;
    double lon = 0.0;
    float alt = 0.0f;
    float roll = 0.0f;
    float pitch = 0.0f;
    float yaw = 0.0f;

    bool operator==(const InsSample&) const = default;
};

struct LineMeta {
    std::uint64_t exposure_start_us = 0;
    double gain = 1.0;
    InsSample ins_before;
    InsSample ins_after;

    bool operator==(const LineMeta&) const = default;
};

struct Violation {
    std::string field;
    std::string reason;
};

template <typename T>
class Cube {
public:
    using value_type = T;

    Cube() = default;
    Cube(std::uint32_t lines, std::uint32_t samples, std::uint32_t bands)
        : lines_(lines), samples_(samples), bands_(bands),
          values_(static_cast<std::size_t>(lines) * samples * bands),
          wavelengths_(bands), line_meta_(lines) {}

    std::uint32_t lines() const noexcept { return lines_; }
    std::uint32_t samples() const noexcept { return samples_; }
    std::uint32_t bands() const noexcept { return bands_; }
    std::size_t pixel_count() const noexcept { return static_cast<std::size_t>(lines_) * samples_; }

    std::size_t index(std::uint32_t line, std::uint32_t sample, std::uint32_t band = 0) const noexcept {
        return (static_cast<std::size_t>(line) * samples_ + sample) * bands_ + band;
    }

    T& at(std::uint32_t line, std::uint32_t sample, std::uint32_t band) noexcept {
        return values_[index(line, sample, band)];
    }
    const T& at(std::uint32_t line, std::uint32_t sample, std::uint32_t band) const noexcept {
        return values_[index(line, sample, band)];
    }

    // Unchecked spectrum view; see pixel_at() for the checked variant.
    std::span<T> pixel(std::uint32_t line, std::uint32_t sample) noexcept {
        return {values_.data() + index(line, sample), bands_};
    }
    std::span<const T> pixel(std::uint32_t line, std::uint32_t sample) const noexcept {
        return {values_.data() + index(line, sample), bands_};
    }

    std::span<const T> line_values(std::uint32_t line) const noexcept {
        return {values_.data() + index(line, 0), static_cast<std::size_t>(samples_) * bands_};
    }

    std::vector<T>& values() noexcept { return values_; }
    const std::vector<T>& values() const noexcept { return values_; }
    std::vector<float>& wavelengths() noexcept { return wavelengths_; }
    const std::vector<float>& wavelengths() const noexcept { return wavelengths_; }
    std::vector<LineMeta>& line_meta() noexcept { return line_meta_; }
    const std::vector<LineMeta>& line_meta() const noexcept { return line_meta_; }

    std::uint32_t cube_id = 0;

    bool operator==(const Cube&) const = default;

private:
    std::uint32_t lines_ = 0;
    std::uint32_t samples_ = 0;
    std::uint32_t bands_ = 0;
    std::vector<T> values_;
    std::vector<float> wavelengths_;
    std::vector<LineMeta> line_meta_;
};

using RawCube = Cube<std::uint16_t>;
using RadianceCube = Cube<float>;

// Boolean lines x samples grid; true marks an anomalous pixel.
struct GroundTruthMask {
    std::uint32_t lines = 0;
    std::uint32_t samples = 0;
    std::vector<std::uint8_t> values;

    GroundTruthMask() = default;
    GroundTruthMask(std::uint32_t l, std::uint32_t s)
        : lines(l), samples(s), values(static_cast<std::size_t>(l) * s, 0) {}

    bool at(std::uint32_t line, std::uint32_t sample) const noexcept {
        return values[static_cast<std::size_t>(line) * samples + sample] != 0;
    }
    void set(std::uint32_t line, std::uint32_t sample, bool v) noexcept {
        values[static_cast<std::size_t>(line) * samples + sample] = v ? 1 : 0;
    }
    std::size_t count() const noexcept;

    bool operator==(const GroundTruthMask&) const = default;
};

// Per-pixel RX scores (squared Mahalanobis distance).
struct ScoreMap {
    std::uint32_t lines = 0;
    std::uint32_t samples = 0;
    std::vector<float> values;
    float max_score = 0.0f;

    float at(std::uint32_t line, std::uint32_t sample) const noexcept {
        return values[static_cast<std::size_t>(line) * samples + sample];
    }
};

// Nearest band to `target_nm`; ties go to the lower index.
std::size_t band_nearest(std::span<const float> wavelengths, double target_nm);

// Reports every broken invariant; never throws.
std::vector<Violation> cube_validate(const RawCube& cube);
std::vector<Violation> cube_validate(const RadianceCube& cube);

// Checked spectrum access.
template <typename T>
std::span<const T> pixel_at(const Cube<T>& cube, std::uint32_t line, std::uint32_t sample) {
    if (line >= cube.lines() || sample >= cube.samples()) {
        throw BoundsError("pixel (" + std::to_string(line) + "," + std::to_string(sample) +
                          ") outside cube of " + std::to_string(cube.lines()) + "x" +
                          std::to_string(cube.samples()));
    }
    return cube.pixel(line, sample);
}

// Wraps an angle in degrees into [-180, 180).
double wrap_degrees(double deg) noexcept;

}  // namespace skyrx
