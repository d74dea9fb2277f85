#include <gtest/gtest.h>

#include <numeric>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "skyrx/calibrate.hpp"
#include "skyrx/synth.hpp"

using namespace skyrx;

namespace {

CalibrationTables uniform_tables(std::uint32_t samples, std::uint32_t bands, float dark, float coeff) {
    const std::size_t n = static_cast<std::size_t>(samples) * bands;
    return {samples, bands, std::vector<float>(n, dark), std::vector<float>(n, coeff)};
}

RadianceCube synthetic_radiance(std::uint32_t bands_in_range, std::uint64_t seed) {
    auto c = fixture::cube<float>(3, 4, bands_in_range + 20);
    c.wavelengths() = synthetic_wavelengths(bands_in_range);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> d(0, 1000);
    for (auto& v : c.values()) v = static_cast<float>(d(rng)) * 0.25f;
    return c;
}

}  // namespace

TEST(ApplyCalibration, IdentityTables) {
    const RawCube raw = fixture::random_raw(3, 4, 5, 1);
    const RadianceCube out = apply_calibration(raw, uniform_tables(4, 5, 0.0f, 1.0f));
    for (std::size_t i = 0; i < raw.values().size(); ++i) EXPECT_EQ(out.values()[i], raw.values()[i]);
}

TEST(ApplyCalibration, HandArithmetic) {
    auto raw = fixture::cube<std::uint16_t>(1, 1, 1);
    raw.values()[0] = 100;
    raw.line_meta()[0].gain = 4.0;
    const RadianceCube out = apply_calibration(raw, uniform_tables(1, 1, 10.0f, 2.0f));
    EXPECT_FLOAT_EQ(out.values()[0], 45.0f);
}

TEST(ApplyCalibration, BelowDarkClampsToZero) {
    auto raw = fixture::cube<std::uint16_t>(1, 1, 1);
    raw.values()[0] = 5;
    const RadianceCube out = apply_calibration(raw, uniform_tables(1, 1, 10.0f, 2.0f));
    EXPECT_EQ(out.values()[0], 0.0f);
}

TEST(ApplyCalibration, ShapeMismatchThrows) {
    const RawCube raw = fixture::random_raw(2, 3, 4, 2);
    EXPECT_THROW(apply_calibration(raw, uniform_tables(3, 3, 0, 1)), InvalidInput);
}

TEST(ApplyCalibration, GainDividesOut) {
    auto cfg = fixture::small_config(1, 50, 30, 20);
    cfg.flight.gain_min = cfg.flight.gain_max = 2.0;
    FlightSynthesizer g2(cfg.scene, cfg.flight, 5);
    cfg.flight.gain_min = cfg.flight.gain_max = 5.0;
    FlightSynthesizer g5(cfg.scene, cfg.flight, 5);
    const RadianceCube a = apply_calibration(g2.cube(0).cube, g2.tables());
    const RadianceCube b = apply_calibration(g5.cube(0).cube, g5.tables());
    ASSERT_EQ(a.values().size(), b.values().size());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) worst = std::max(worst, oracle::rel_err(a.values()[i], b.values()[i]));
    EXPECT_LE(worst, 1e-6);
}

TEST(ApplyCalibration, Monotone) {
    auto raw = fixture::cube<std::uint16_t>(1, 1, 1);
    const auto t = uniform_tables(1, 1, 37.0f, 0.013f);
    float prev = -1.0f;
    for (int v = 0; v < 65536; v += 97) {
        raw.values()[0] = static_cast<std::uint16_t>(v);
        const float r = apply_calibration(raw, t).values()[0];
        EXPECT_GE(r, prev);
        prev = r;
    }
}

TEST(DiscardBands, SyntheticLayoutKeeps280) {
    auto c = fixture::cube<float>(1, 2, 300);
    c.wavelengths() = synthetic_wavelengths(280);
    const RadianceCube out = discard_oob_bands(c);
    EXPECT_EQ(out.bands(), 280u);
    EXPECT_FLOAT_EQ(out.wavelengths().front(), 400.0f);
    EXPECT_FLOAT_EQ(out.wavelengths().back(), 1000.0f);
}

TEST(DiscardBands, InsideUnchangedOutsideEmpty) {
    auto in = fixture::cube<float>(2, 2, 5);
    for (std::size_t i = 0; i < in.values().size(); ++i) in.values()[i] = static_cast<float>(i);
    const RadianceCube same = discard_oob_bands(in);
    EXPECT_EQ(same.values(), in.values());
    EXPECT_EQ(same.wavelengths(), in.wavelengths());

    auto out = fixture::cube<float>(2, 2, 3);
    out.wavelengths() = {300, 350, 1100};
    EXPECT_EQ(discard_oob_bands(out).bands(), 0u);
}

TEST(DiscardBands, KeepsTheRightValues) {
    RadianceCube c = synthetic_radiance(20, 4);
    const RadianceCube out = discard_oob_bands(c);
    ASSERT_EQ(out.bands(), 20u);
    for (std::uint32_t l = 0; l < c.lines(); ++l)
        for (std::uint32_t s = 0; s < c.samples(); ++s)
            for (std::uint32_t b = 0; b < 20; ++b) EXPECT_EQ(out.at(l, s, b), c.at(l, s, b + 10));
}

TEST(BinBands, OnesBecomeFours) {
    auto c = fixture::cube<float>(2, 3, 280);
    std::fill(c.values().begin(), c.values().end(), 1.0f);
    const RadianceCube out = bin_bands(c, 4);
    EXPECT_EQ(out.bands(), 70u);
    for (float v : out.values()) EXPECT_EQ(v, 4.0f);
}

TEST(BinBands, WavelengthIsMeanAndSpacingNearNinePointOne) {
    auto c = fixture::cube<float>(1, 1, 300);
    c.wavelengths() = synthetic_wavelengths(280);
    const RadianceCube out = bin_bands(discard_oob_bands(c), 4);
    ASSERT_EQ(out.bands(), 70u);
    const std::vector<float> in = discard_oob_bands(c).wavelengths();
    for (std::size_t j = 0; j < 70; ++j) {
        const double mean = (in[4 * j] + in[4 * j + 1] + in[4 * j + 2] + in[4 * j + 3]) / 4.0;
        EXPECT_NEAR(out.wavelengths()[j], mean, 1e-3);
    }
    // 280 bands linear over [400, 1000] put bins 4 * 600/279 nm apart.
    const double spacing = (out.wavelengths().back() - out.wavelengths().front()) / 69.0;
    EXPECT_NEAR(spacing, 4.0 * 600.0 / 279.0, 1e-3);
    EXPECT_NEAR(spacing, 9.1, 0.1 * 9.1);
}

TEST(BinBands, TotalSumPreserved) {
    RadianceCube c = discard_oob_bands(synthetic_radiance(40, 9));
    const RadianceCube out = bin_bands(c, 4);
    // Quarter-integer values below 2^22: every partial sum is exact.
    const double a = std::accumulate(c.values().begin(), c.values().end(), 0.0);
    const double b = std::accumulate(out.values().begin(), out.values().end(), 0.0);
    EXPECT_EQ(a, b);
}

TEST(BinBands, CommutesWithScaling) {
    RadianceCube c = discard_oob_bands(synthetic_radiance(40, 10));
    RadianceCube scaled = c;
    for (auto& v : scaled.values()) v *= 8.0f;
    const RadianceCube a = bin_bands(scaled, 4);
    const RadianceCube b = bin_bands(c, 4);
    for (std::size_t i = 0; i < a.values().size(); ++i) EXPECT_EQ(a.values()[i], 8.0f * b.values()[i]);
}

TEST(BinBands, NonDivisibleThrows) {
    auto c = fixture::cube<float>(1, 1, 10);
    EXPECT_THROW(bin_bands(c, 4), InvalidInput);
}

TEST(ExtractRgb, ConstantRedPlane) {
    auto c = fixture::cube<float>(2, 2, 70);
    for (std::uint32_t b = 0; b < 70; ++b) c.wavelengths()[b] = 404.29f + 9.143f * b;
    const RgbBands idx = rgb_bands(c.wavelengths());
    for (std::uint32_t l = 0; l < 2; ++l)
        for (std::uint32_t s = 0; s < 2; ++s) c.at(l, s, static_cast<std::uint32_t>(idx.red)) = 7.0f;
    const RgbImage img = extract_rgb(c);
    for (std::size_t p = 0; p < 4; ++p) EXPECT_EQ(img.values[3 * p], 7.0f);
}

TEST(ExtractRgb, IndicesMatchOracleOnStandardGrid) {
    auto c = fixture::cube<float>(1, 1, 300);
    c.wavelengths() = synthetic_wavelengths(280);
    const auto wl = bin_bands(discard_oob_bands(c), 4).wavelengths();
    const RgbBands idx = rgb_bands(wl);
    EXPECT_EQ(idx.red, oracle::nearest_index(wl, 640));
    EXPECT_EQ(idx.green, oracle::nearest_index(wl, 550));
    EXPECT_EQ(idx.blue, oracle::nearest_index(wl, 460));
}

TEST(ExtractRgb, GrayscaleSceneGivesEqualChannels) {
    auto c = fixture::cube<float>(3, 3, 70);
    for (std::uint32_t b = 0; b < 70; ++b) c.wavelengths()[b] = 404.0f + 9.0f * b;
    for (std::uint32_t l = 0; l < 3; ++l)
        for (std::uint32_t s = 0; s < 3; ++s)
            for (std::uint32_t b = 0; b < 70; ++b) c.at(l, s, b) = static_cast<float>(l * 3 + s);
    const RgbImage img = extract_rgb(c);
    for (std::size_t p = 0; p < 9; ++p) {
        EXPECT_EQ(img.values[3 * p], img.values[3 * p + 1]);
        EXPECT_EQ(img.values[3 * p + 1], img.values[3 * p + 2]);
    }
}

TEST(CalibrateAndBin, BitIdenticalToComposition) {
    const auto cfg = fixture::small_config(1, 50, 30, 40);
    FlightSynthesizer syn(cfg.scene, cfg.flight, 2);
    const RawCube raw = syn.cube(0).cube;
    const RadianceCube a = calibrate_and_bin(raw, syn.tables(), 4);
    const RadianceCube b = bin_bands(discard_oob_bands(apply_calibration(raw, syn.tables())), 4);
    EXPECT_EQ(a.values(), b.values());
    EXPECT_EQ(a.wavelengths(), b.wavelengths());
    EXPECT_EQ(a.line_meta(), b.line_meta());
    EXPECT_EQ(a.bands(), 10u);
}

TEST(CalibrateAndBin, BandCountsThroughTheChain) {
    auto raw = fixture::cube<std::uint16_t>(1, 2, 300);
    raw.wavelengths() = synthetic_wavelengths(280);
    const RadianceCube a = apply_calibration(raw, synthetic_tables(2, 300));
    const RadianceCube b = discard_oob_bands(a);
    const RadianceCube c = bin_bands(b, 4);
    EXPECT_EQ(a.bands(), 300u);
    EXPECT_EQ(b.bands(), 280u);
    EXPECT_EQ(c.bands(), 70u);
    EXPECT_EQ(calibrate_and_bin(raw, synthetic_tables(2, 300)).bands(), 70u);
}
