#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "skyrx/geo.hpp"
#include "skyrx/synth.hpp"

using namespace skyrx;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;
const GeoOrigin kOrigin{};

InsSample ins_at(double east, double north, std::uint64_t t, float yaw = 0.0f, float alt = 40.0f) {
    InsSample s;
    s.timestamp_us = t;
    to_geodetic(kOrigin, east, north, s.lat, s.lon);
    s.alt = alt;
    s.yaw = yaw;
    return s;
}

Pose level_pose(double east, double north, double yaw = 0.0) {
    Pose p;
    p.east = east;
    p.north = north;
    p.alt = 40.0;
    p.yaw = yaw;
    return p;
}

// Straight northbound flight sampled every line, values tagged per sample.
std::vector<LineSplat> straight_swath(std::uint32_t lines, std::uint32_t samples) {
    std::vector<LineSplat> out;
    for (std::uint32_t l = 0; l < lines; ++l) {
        LineSplat s;
        s.points = project_line(level_pose(30.0, 5.0 * l / 249.0), {samples, 47.5});
        for (std::uint32_t j = 0; j < samples; ++j) {
            const float v = static_cast<float>(l * samples + j);
            s.rgb.insert(s.rgb.end(), {v, v + 0.25f, v + 0.5f});
            s.score.push_back(v);
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

TEST(LocalFrame, RoundTrip) {
    double lat, lon;
    to_geodetic(kOrigin, 123.5, -45.25, lat, lon);
    const LocalPoint p = to_local(kOrigin, lat, lon);
    EXPECT_NEAR(p.east, 123.5, 1e-6);
    EXPECT_NEAR(p.north, -45.25, 1e-6);
}

TEST(InterpolatePose, EndpointsAndMidpoint) {
    const InsSample a = ins_at(0.0, 0.0, 1000), b = ins_at(10.0, 0.0, 2000);
    const Pose p0 = interpolate_pose(a, b, 1000, kOrigin);
    EXPECT_NEAR(p0.east, 0.0, 1e-9);
    EXPECT_EQ(p0.time_us, 1000u);
    EXPECT_NEAR(interpolate_pose(a, b, 1500, kOrigin).east, 5.0, 1e-6);
    EXPECT_NEAR(interpolate_pose(a, b, 2000, kOrigin).east, 10.0, 1e-6);
}

TEST(InterpolatePose, YawThroughWraparound) {
    const InsSample a = ins_at(0, 0, 0, -10.0f), b = ins_at(0, 0, 100, 10.0f);
    const InsSample a2 = ins_at(0, 0, 0, 170.0f), b2 = ins_at(0, 0, 100, -170.0f);
    // Oracle: direction of the summed unit vectors, which bisects the shorter arc.
    const auto bisect = [](double y0, double y1) {
        return std::atan2(std::sin(y0 * kDeg) + std::sin(y1 * kDeg), std::cos(y0 * kDeg) + std::cos(y1 * kDeg)) / kDeg;
    };
    EXPECT_NEAR(interpolate_pose(a, b, 50, kOrigin).yaw, bisect(350.0, 10.0), 1e-6);
    EXPECT_NEAR(interpolate_pose(a, b, 50, kOrigin).yaw, 0.0, 1e-6);
    EXPECT_NEAR(std::fabs(interpolate_pose(a2, b2, 50, kOrigin).yaw), std::fabs(bisect(170.0, -170.0)), 1e-6);
    EXPECT_NEAR(interpolate_pose(a2, b2, 25, kOrigin).yaw, 175.0, 1e-4);
}

TEST(InterpolatePose, OutsideBracketThrows) {
    const InsSample a = ins_at(0, 0, 1000), b = ins_at(1, 0, 2000);
    EXPECT_THROW(interpolate_pose(a, b, 999, kOrigin), InvalidInput);
    EXPECT_THROW(interpolate_pose(a, b, 2001, kOrigin), InvalidInput);
    EXPECT_THROW(interpolate_pose(b, a, 1500, kOrigin), InvalidInput);
    EXPECT_NO_THROW(interpolate_pose(a, a, 1000, kOrigin));
}

TEST(InterpolatePose, Continuous) {
    const InsSample a = ins_at(3, 4, 0, 20.0f), b = ins_at(5, 9, 5000, 25.0f);
    for (std::uint64_t t = 0; t < 5000; t += 250) {
        const Pose p = interpolate_pose(a, b, t, kOrigin), q = interpolate_pose(a, b, t + 1, kOrigin);
        EXPECT_LT(std::hypot(q.east - p.east, q.north - p.north), 1e-2);
        EXPECT_LT(std::fabs(q.yaw - p.yaw), 1e-2);
    }
}

TEST(ProjectLine, SwathWidthAtFortyMeters) {
    const auto pts = project_line(level_pose(0, 0), {900, 47.5});
    ASSERT_TRUE(pts.front().valid && pts.back().valid);
    const double width = pts.back().east - pts.front().east;
    EXPECT_NEAR(width, 2.0 * 40.0 * std::tan(23.75 * kDeg), 1e-9);
    EXPECT_NEAR(width, 35.19, 0.02);
    for (const auto& p : pts) EXPECT_NEAR(p.north, 0.0, 1e-9);
}

TEST(ProjectLine, CenterSampleIsNadir) {
    const auto pts = project_line(level_pose(7, -3), {3, 47.5});
    EXPECT_NEAR(pts[1].east, 7.0, 1e-12);
    EXPECT_NEAR(pts[1].north, -3.0, 1e-12);
    EXPECT_EQ(sample_angle_deg(0, {3, 47.5}), -23.75);
}

TEST(ProjectLine, YawRotatesAboutNadir) {
    const CameraModel cam{9, 47.5};
    const auto base = project_line(level_pose(10, 20), cam);
    for (double yaw : {90.0, -45.0, 135.0}) {
        const auto rot = project_line(level_pose(10, 20, yaw), cam);
        // Clockwise rotation (heading) of the ground offset in the east/north plane.
        const double c = std::cos(yaw * kDeg), s = std::sin(yaw * kDeg);
        for (std::uint32_t j = 0; j < 9; ++j) {
            const double de = base[j].east - 10, dn = base[j].north - 20;
            EXPECT_NEAR(rot[j].east, 10 + c * de + s * dn, 1e-9);
            EXPECT_NEAR(rot[j].north, 20 - s * de + c * dn, 1e-9);
        }
    }
}

TEST(ProjectLine, StarboardIsEastWhenHeadingNorth) {
    const auto pts = project_line(level_pose(0, 0), {5, 47.5});
    EXPECT_LT(pts[0].east, 0.0);
    EXPECT_GT(pts[4].east, 0.0);
}

TEST(ProjectLine, RaysAboveHorizonInvalid) {
    Pose p = level_pose(0, 0);
    p.roll = 80.0;
    const auto pts = project_line(p, {101, 47.5});
    // Right wing down swings the slit to port, past the horizon there.
    EXPECT_FALSE(pts.front().valid);
    EXPECT_TRUE(pts.back().valid);
    p = level_pose(0, 0);
    p.alt = -1.0;
    for (const auto& q : project_line(p, {5, 47.5})) EXPECT_FALSE(q.valid);
    EXPECT_THROW(project_line(level_pose(0, 0), {5, 180.0}), InvalidInput);
}

TEST(ProjectLine, FootprintWithinAttitudeDisk) {
    FlightSpec f = default_flight(1);
    f.lines_per_cube = 200;
    f.roll_amp_deg = 3.0;
    f.pitch_amp_deg = 2.0;
    f.roll_period_s = 0.3;
    f.pitch_period_s = 0.2;
    SceneSpec scene;
    scene.background.knots = {{400, 1}};
    scene.length_m = 20.0;
    FlightSynthesizer syn(scene, f, 1);
    for (std::uint64_t l = 0; l < 200; ++l) {
        const Pose p = syn.true_pose(syn.exposure_time_us(l));
        const double bound = p.alt * std::tan((23.75 + 3.0 + 2.0) * kDeg) + 1e-9;
        for (const auto& g : project_line(p, syn.camera())) {
            ASSERT_TRUE(g.valid);
            ASSERT_LE(std::hypot(g.east - p.east, g.north - p.north), bound);
        }
    }
}

TEST(Rasterize, SingleLineIsOneRow) {
    const auto lines = straight_swath(1, 900);
    const Raster r = rasterize(lines);
    EXPECT_EQ(r.height, 1u);
    EXPECT_NEAR(r.width * r.gsd, 35.19, 2.0 * r.gsd);
    EXPECT_GT(r.valid_count(), static_cast<std::size_t>(0.85 * r.width));
}

TEST(Rasterize, DefaultGsdIsMedianSpacing) {
    const auto lines = straight_swath(2, 101);
    std::vector<double> sp;
    for (std::uint32_t j = 1; j < 101; ++j) sp.push_back(lines[0].points[j].east - lines[0].points[j - 1].east);
    sp.insert(sp.end(), sp.begin(), sp.end());
    std::sort(sp.begin(), sp.end());
    EXPECT_NEAR(median_sample_spacing(lines), sp[sp.size() / 2], 1e-12);
    EXPECT_NEAR(rasterize(lines).gsd, sp[sp.size() / 2], 1e-12);
}

TEST(Rasterize, StraightFlightCellsMatchProjection) {
    const auto lines = straight_swath(100, 300);
    const Raster r = rasterize(lines, 0.1);
    for (std::uint32_t l = 0; l < 100; l += 9) {
        for (std::uint32_t j = 0; j < 300; j += 17) {
            const double theta = 47.5 * (j / 299.0 - 0.5) * kDeg;
            const double east = 30.0 + 40.0 * std::tan(theta), north = 5.0 * l / 249.0;
            const auto c = r.locate(east, north);
            ASSERT_TRUE(c.has_value());
            ASSERT_TRUE(r.valid[*c]);
            const LocalPoint centre = r.cell_center(static_cast<std::uint32_t>(*c / r.width),
                                                    static_cast<std::uint32_t>(*c % r.width));
            EXPECT_LE(std::fabs(centre.east - east), r.gsd);
            EXPECT_LE(std::fabs(centre.north - north), r.gsd);
        }
    }
}

TEST(Rasterize, HalfGsdQuadruplesCellCount) {
    const auto lines = straight_swath(400, 900);
    const Raster a = rasterize(lines, 0.1), b = rasterize(lines, 0.05);
    const double ratio = static_cast<double>(b.valid_count()) / (4.0 * a.valid_count());
    EXPECT_NEAR(ratio, 1.0, 0.02);
}

TEST(Rasterize, NeverInventsValues) {
    const auto lines = straight_swath(50, 200);
    std::set<float> scores;
    for (const auto& l : lines) scores.insert(l.score.begin(), l.score.end());
    const Raster r = rasterize(lines, 0.07);
    for (std::size_t i = 0; i < r.valid.size(); ++i) {
        if (!r.valid[i]) {
            EXPECT_EQ(r.score[i], 0.0f);
            continue;
        }
        ASSERT_TRUE(scores.count(r.score[i]));
        EXPECT_EQ(r.rgb[3 * i], r.score[i]);
        EXPECT_EQ(r.rgb[3 * i + 2], r.score[i] + 0.5f);
    }
}

TEST(Rasterize, LaterLinesOverwrite) {
    auto lines = straight_swath(1, 50);
    lines.push_back(lines[0]);
    for (auto& v : lines[1].score) v += 1000.0f;
    const Raster r = rasterize(lines, 1.0);
    for (std::size_t i = 0; i < r.valid.size(); ++i) {
        if (r.valid[i]) {
            EXPECT_GE(r.score[i], 1000.0f);
        }
    }
}

TEST(Rasterize, Errors) {
    EXPECT_THROW(rasterize(std::vector<LineSplat>{}), InvalidInput);
    LineSplat empty;
    empty.points.resize(4);
    EXPECT_THROW(rasterize(std::vector<LineSplat>{empty}), InvalidInput);
    EXPECT_THROW(rasterize(straight_swath(1, 10), 0.0), InvalidInput);
    EXPECT_THROW(rasterize(straight_swath(1, 10), -1.0), InvalidInput);
}
