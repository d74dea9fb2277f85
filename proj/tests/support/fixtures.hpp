#pragma once

#include <cstdint>
#include <random>

#include "skyrx/cube.hpp"
#include "skyrx/pipeline.hpp"
#include "skyrx/synth.hpp"

namespace fixture {

// Well-formed cube with increasing wavelengths and bracketed line metadata.
template <typename T>
skyrx::Cube<T> cube(std::uint32_t lines, std::uint32_t samples, std::uint32_t bands) {
    skyrx::Cube<T> c(lines, samples, bands);
    for (std::uint32_t b = 0; b < bands; ++b) c.wavelengths()[b] = 400.0f + 10.0f * static_cast<float>(b);
    for (std::uint32_t l = 0; l < lines; ++l) {
        auto& m = c.line_meta()[l];
        m.exposure_start_us = 1'000'000 + 4016ULL * l;
        m.gain = 1.0;
        m.ins_before.timestamp_us = m.exposure_start_us - 1000;
        m.ins_after.timestamp_us = m.exposure_start_us + 4000;
    }
    return c;
}

inline skyrx::RawCube random_raw(std::uint32_t lines, std::uint32_t samples, std::uint32_t bands,
                                 std::uint64_t seed) {
    auto c = cube<std::uint16_t>(lines, samples, bands);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(0, 65535);
    for (auto& v : c.values()) v = static_cast<std::uint16_t>(d(rng));
    return c;
}

// Small flight: quick to synthesize but with the full band layout logic.
inline skyrx::FlightSpec small_flight(std::uint32_t cubes = 2, std::uint32_t lines = 100,
                                      std::uint32_t samples = 120, std::uint32_t in_range = 40) {
    skyrx::FlightSpec f = skyrx::default_flight(cubes);
    f.lines_per_cube = lines;
    f.samples = samples;
    f.bands_in_range = in_range;
    return f;
}

inline skyrx::PipelineConfig small_config(std::uint32_t cubes = 2, std::uint32_t lines = 100,
                                          std::uint32_t samples = 120, std::uint32_t in_range = 40) {
    skyrx::PipelineConfig c;
    c.flight = small_flight(cubes, lines, samples, in_range);
    c.scene = skyrx::default_scene(c.flight);
    c.seed = 7;
    return c;
}

}  // namespace fixture
