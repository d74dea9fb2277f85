#pragma once

// Raw-to-radiance conversion and the band reduction that precedes detection.

#include <cstdint>
#include <vector>

#include "skyrx/cube.hpp"
#include "skyrx/formats.hpp"

namespace skyrx {

inline constexpr double kBandMinNm = 400.0;
inline constexpr double kBandMaxNm = 1000.0;
inline constexpr std::uint32_t kDefaultBinFactor = 4;
inline constexpr double kRedNm = 640.0;
inline constexpr double kGreenNm = 550.0;
inline constexpr double kBlueNm = 460.0;

// Per-pixel display color, 3 floats (R, G, B) per pixel in radiance units.
struct RgbImage {
    std::uint32_t lines = 0;
    std::uint32_t samples = 0;
    std::vector<float> values;

    RgbImage() = default;
    RgbImage(std::uint32_t l, std::uint32_t s) : lines(l), samples(s), values(3 * static_cast<std::size_t>(l) * s) {}

    const float* at(std::uint32_t line, std::uint32_t sample) const noexcept {
        return values.data() + 3 * (static_cast<std::size_t>(line) * samples + sample);
    }
};

// out = max(0, raw - dark) * coeff / gain, evaluated in double and stored as float.
RadianceCube apply_calibration(const RawCube& raw, const CalibrationTables& tables);

// Keeps bands with 400 <= wavelength <= 1000 nm.
RadianceCube discard_oob_bands(const RadianceCube& cube);

// Sums `factor` consecutive bands; the new center is the mean of the members.
RadianceCube bin_bands(const RadianceCube& cube, std::uint32_t factor = kDefaultBinFactor);

struct RgbBands {
    std::size_t red = 0;
    std::size_t green = 0;
    std::size_t blue = 0;
};
RgbBands rgb_bands(const std::vector<float>& wavelengths);
RgbImage extract_rgb(const RadianceCube& cube);

// Single-pass equivalent of bin_bands(discard_oob_bands(apply_calibration(raw))),
// bit-identical to the composition but without the 300-band intermediate.
RadianceCube calibrate_and_bin(const RawCube& raw, const CalibrationTables& tables,
                               std::uint32_t factor = kDefaultBinFactor);

}  // namespace skyrx
