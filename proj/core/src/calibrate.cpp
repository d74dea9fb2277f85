#include "skyrx/calibrate.hpp"

#include <algorithm>
#include <numeric>

namespace skyrx {

namespace {

void check_tables(const RawCube& raw, const CalibrationTables& tables) {
    const std::size_t n = static_cast<std::size_t>(raw.samples()) * raw.bands();
    if (tables.samples != raw.samples() || tables.bands != raw.bands() || tables.dark.size() != n ||
        tables.coeff.size() != n) {
        throw InvalidInput("calibration tables are " + std::to_string(tables.samples) + "x" +
                           std::to_string(tables.bands) + ", cube needs " + std::to_string(raw.samples()) + "x" +
                           std::to_string(raw.bands()));
    }
    for (const LineMeta& m : raw.line_meta()) {
        if (!(m.gain > 0.0)) throw InvalidInput("calibration: line gain must be > 0");
    }
}

inline float radiance(std::uint16_t dn, float dark, float coeff, double gain) noexcept {
    const double v = std::max(0.0, static_cast<double>(dn) - dark) * coeff / gain;
    return static_cast<float>(v);
}

std::vector<std::size_t> in_range_bands(const std::vector<float>& wl) {
    std::vector<std::size_t> keep;
    for (std::size_t b = 0; b < wl.size(); ++b) {
        if (wl[b] >= kBandMinNm && wl[b] <= kBandMaxNm) keep.push_back(b);
    }
    return keep;
}

std::vector<float> binned_wavelengths(const std::vector<float>& wl, std::uint32_t factor) {
    std::vector<float> out(wl.size() / factor);
    for (std::size_t j = 0; j < out.size(); ++j) {
        double sum = 0.0;
        for (std::uint32_t k = 0; k < factor; ++k) sum += wl[j * factor + k];
        out[j] = static_cast<float>(sum / factor);
    }
    return out;
}

template <typename T>
RadianceCube shaped_like(const Cube<T>& src, std::uint32_t bands) {
    RadianceCube out(src.lines(), src.samples(), bands);
    out.cube_id = src.cube_id;
    out.line_meta() = src.line_meta();
    return out;
}

}  // namespace

RadianceCube apply_calibration(const RawCube& raw, const CalibrationTables& tables) {
    check_tables(raw, tables);
    RadianceCube out = shaped_like(raw, raw.bands());
    out.wavelengths() = raw.wavelengths();
    const std::uint32_t bands = raw.bands();
    for (std::uint32_t l = 0; l < raw.lines(); ++l) {
        const double gain = raw.line_meta()[l].gain;
        for (std::uint32_t s = 0; s < raw.samples(); ++s) {
            const std::uint16_t* in = raw.pixel(l, s).data();
            float* o = out.pixel(l, s).data();
            const std::size_t row = static_cast<std::size_t>(s) * bands;
            for (std::uint32_t b = 0; b < bands; ++b) {
                o[b] = radiance(in[b], tables.dark[row + b], tables.coeff[row + b], gain);
            }
        }
    }
    return out;
}

RadianceCube discard_oob_bands(const RadianceCube& cube) {
    const std::vector<std::size_t> keep = in_range_bands(cube.wavelengths());
    RadianceCube out = shaped_like(cube, static_cast<std::uint32_t>(keep.size()));
    for (std::size_t k = 0; k < keep.size(); ++k) out.wavelengths()[k] = cube.wavelengths()[keep[k]];
    if (keep.empty()) return out;
    for (std::uint32_t l = 0; l < cube.lines(); ++l) {
        for (std::uint32_t s = 0; s < cube.samples(); ++s) {
            const float* in = cube.pixel(l, s).data();
            float* o = out.pixel(l, s).data();
            for (std::size_t k = 0; k < keep.size(); ++k) o[k] = in[keep[k]];
        }
    }
    return out;
}

RadianceCube bin_bands(const RadianceCube& cube, std::uint32_t factor) {
    if (factor == 0 || cube.bands() % factor != 0) {
        throw InvalidInput("bin_bands: " + std::to_string(cube.bands()) + " bands not divisible by factor " +
                           std::to_string(factor));
    }
    const std::uint32_t out_bands = cube.bands() / factor;
    RadianceCube out = shaped_like(cube, out_bands);
    out.wavelengths() = binned_wavelengths(cube.wavelengths(), factor);
    for (std::uint32_t l = 0; l < cube.lines(); ++l) {
        for (std::uint32_t s = 0; s < cube.samples(); ++s) {
            const float* in = cube.pixel(l, s).data();
            float* o = out.pixel(l, s).data();
            for (std::uint32_t j = 0; j < out_bands; ++j) {
                float sum = 0.0f;
                for (std::uint32_t k = 0; k < factor; ++k) sum += in[j * factor + k];
                o[j] = sum;
            }
        }
    }
    return out;
}

RgbBands rgb_bands(const std::vector<float>& wavelengths) {
    return {band_nearest(wavelengths, kRedNm), band_nearest(wavelengths, kGreenNm),
            band_nearest(wavelengths, kBlueNm)};
}

RgbImage extract_rgb(const RadianceCube& cube) {
    const RgbBands idx = rgb_bands(cube.wavelengths());
    RgbImage img(cube.lines(), cube.samples());
    std::size_t p = 0;
    for (std::uint32_t l = 0; l < cube.lines(); ++l) {
        for (std::uint32_t s = 0; s < cube.samples(); ++s, ++p) {
            const float* px = cube.pixel(l, s).data();
            img.values[3 * p + 0] = px[idx.red];
            img.values[3 * p + 1] = px[idx.green];
            img.values[3 * p + 2] = px[idx.blue];
        }
    }
    return img;
}

RadianceCube calibrate_and_bin(const RawCube& raw, const CalibrationTables& tables, std::uint32_t factor) {
    check_tables(raw, tables);
    const std::vector<std::size_t> keep = in_range_bands(raw.wavelengths());
    if (factor == 0 || keep.size() % factor != 0) {
        throw InvalidInput("calibrate_and_bin: " + std::to_string(keep.size()) +
                           " in-range bands not divisible by factor " + std::to_string(factor));
    }
    std::vector<float> kept_wl(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) kept_wl[k] = raw.wavelengths()[keep[k]];

    const auto out_bands = static_cast<std::uint32_t>(keep.size() / factor);
    RadianceCube out = shaped_like(raw, out_bands);
    out.wavelengths() = binned_wavelengths(kept_wl, factor);
    const std::uint32_t bands = raw.bands();
    for (std::uint32_t l = 0; l < raw.lines(); ++l) {
        const double gain = raw.line_meta()[l].gain;
        for (std::uint32_t s = 0; s < raw.samples(); ++s) {
            const std::uint16_t* in = raw.pixel(l, s).data();
            float* o = out.pixel(l, s).data();
            const std::size_t row = static_cast<std::size_t>(s) * bands;
            for (std::uint32_t j = 0; j < out_bands; ++j) {
                float sum = 0.0f;
                for (std::uint32_t k = 0; k < factor; ++k) {
                    const std::size_t b = keep[j * factor + k];
                    sum += radiance(in[b], tables.dark[row + b], tables.coeff[row + b], gain);
                }
                o[j] = sum;
            }
        }
    }
    return out;
}

}  // namespace skyrx
