#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "skyrx/ground.hpp"
#include "skyrx/pipeline.hpp"

using namespace skyrx;

namespace {

// Two 100-line cubes, shared by the tests below.
const std::vector<Frame>& flight_frames() {
    static const std::vector<Frame> frames = [] {
        std::vector<Frame> out;
        run_air(fixture::small_config(2), [&](const Frame& f) { out.push_back(f); });
        return out;
    }();
    return frames;
}

GroundConfig config() {
    GroundConfig g;
    g.origin = fixture::small_flight().origin;
    return g;
}

}  // namespace

TEST(Ground, MissingGroupLeavesFiftyBlackLines) {
    std::vector<Frame> frames;
    for (const Frame& f : flight_frames()) {
        if (f.group_id != 1) frames.push_back(f);
    }
    const GroundResult g = run_ground(frames, config());
    ASSERT_EQ(g.cubes.size(), 2u);
    const ReceivedCube& c = g.cubes[0];
    EXPECT_DOUBLE_EQ(c.completion(), 0.5);
    for (std::uint32_t l = 0; l < 100; ++l) {
        EXPECT_EQ(c.present(l), l < 50) << l;
        if (l >= 50) {
            for (std::uint32_t s = 0; s < c.samples; ++s) {
                const std::size_t p = static_cast<std::size_t>(l) * c.samples + s;
                ASSERT_EQ(c.scores[p], 0.0f);
                ASSERT_EQ(c.rgb[3 * p], 0.0f);
            }
        }
    }
    EXPECT_EQ(g.cubes[1].completion(), 1.0);
}

TEST(Ground, ParityRecoversUpToTwentyFiveLosses) {
    std::mt19937_64 rng(3);
    std::vector<Frame> frames;
    std::size_t data_lost = 0;
    const auto& all = flight_frames();
    for (std::size_t g0 = 0; g0 < all.size(); g0 += 75) {
        std::vector<std::size_t> idx(75);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        std::set<std::size_t> lost(idx.begin(), idx.begin() + 25);
        for (std::size_t i = 0; i < 75; ++i) {
            if (lost.count(i)) {
                data_lost += i < 50;
            } else {
                frames.push_back(all[g0 + i]);
            }
        }
    }
    const GroundResult lossy = run_ground(frames, config());
    const GroundResult clean = run_ground(all, config());
    EXPECT_EQ(lossy.counters.recovered, data_lost);
    ASSERT_EQ(lossy.cubes.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(lossy.cubes[i], clean.cubes[i]);
}

TEST(Ground, DuplicatesAndLateFramesAreHarmless) {
    GroundStation twice(config()), once(config());
    for (const Frame& f : flight_frames()) {
        twice.ingest(f);
        twice.ingest(f);
        once.ingest(f);
    }
    twice.ingest(flight_frames().front());  // group 0 is long closed
    twice.finish();
    once.finish();
    EXPECT_EQ(twice.cubes(), once.cubes());
    // The 75th frame closes its group, so its repeat counts as late.
    EXPECT_EQ(twice.counters().duplicates, flight_frames().size() - 4);
    EXPECT_EQ(twice.counters().late, 5u);
}

TEST(Ground, MalformedRecordsSkipped) {
    std::vector<std::vector<std::uint8_t>> records;
    for (const Frame& f : flight_frames()) records.push_back(encode_frame(f));
    records.insert(records.begin() + 10, std::vector<std::uint8_t>{1, 2, 3});
    auto corrupt = records[20];
    corrupt[5] = 9;  // unknown frame kind
    records.insert(records.begin() + 20, corrupt);
    const GroundResult g = run_ground(records, config());
    EXPECT_EQ(g.counters.malformed, 2u);
    ASSERT_EQ(g.cubes.size(), 2u);
    EXPECT_EQ(g.cubes[0].completion(), 1.0);
}

TEST(Ground, EventsPerGroupAndCube) {
    GroundStation st(config());
    std::vector<GroundEvent> events;
    st.subscribe([&](const GroundEvent& e) { events.push_back(e); });
    for (const Frame& f : flight_frames()) st.ingest(f);
    st.finish();
    std::size_t batches = 0, cubes = 0;
    for (const auto& e : events) {
        if (e.type == GroundEvent::Type::LineBatch) {
            ++batches;
            EXPECT_EQ(e.count, 50u);
        } else {
            EXPECT_EQ(e.cube_id, cubes);
            ++cubes;
            EXPECT_EQ(e.completion, 1.0);
            EXPECT_TRUE(e.bounds.valid());
        }
    }
    EXPECT_EQ(batches, 4u);
    EXPECT_EQ(cubes, 2u);
    // Cube 0 closes as soon as its last group does, before cube 1 is done.
    EXPECT_EQ(events[2].type, GroundEvent::Type::Cube);
}

TEST(Ground, GsdFixedByFirstCubeAndSettable) {
    GroundStation st(config());
    const auto& all = flight_frames();
    for (std::size_t i = 0; i < 150; ++i) st.ingest(all[i]);
    ASSERT_EQ(st.cube_status().size(), 1u);
    const auto gsd0 = st.gsd();
    ASSERT_TRUE(gsd0.has_value());
    for (std::size_t i = 150; i < all.size(); ++i) st.ingest(all[i]);
    st.finish();
    EXPECT_EQ(st.gsd(), gsd0);
    const auto before = st.mosaic();
    st.set_gsd(*gsd0 / 2);
    const auto after = st.mosaic();
    EXPECT_EQ(after->gsd, *gsd0 / 2);
    EXPECT_GT(after->valid_count(), before->valid_count());
    EXPECT_EQ(before->gsd, *gsd0);  // old snapshot untouched
    EXPECT_THROW(st.set_gsd(0.0), InvalidInput);
    EXPECT_THROW(GroundStation(GroundConfig{{}, 47.5, 0.0, -1.0}), InvalidInput);
}

TEST(Ground, EmptyStation) {
    GroundStation st(config());
    st.finish();
    EXPECT_EQ(st.mosaic(), nullptr);
    EXPECT_TRUE(st.cubes().empty());
    EXPECT_FALSE(st.gsd().has_value());
}

TEST(Ground, MosaicAreaMatchesSwathPolygon) {
    auto cfg = fixture::small_config(2, 200, 900, 40);
    cfg.flight.roll_amp_deg = cfg.flight.pitch_amp_deg = cfg.flight.yaw_amp_deg = 0.0;
    std::vector<Frame> frames;
    run_air(cfg, [&](const Frame& f) { frames.push_back(f); });
    GroundConfig gc = config();
    gc.gsd = 0.05;
    const GroundResult g = run_ground(frames, gc);

    // Shoelace area of the swath outline: left edge forward, right edge back.
    std::vector<std::pair<double, double>> poly;
    std::vector<LineSplat> lines;
    for (const auto& c : g.cubes) {
        auto s = c.splats(gc.origin);
        lines.insert(lines.end(), s.begin(), s.end());
    }
    for (const auto& l : lines) poly.emplace_back(l.points.front().east, l.points.front().north);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) poly.emplace_back(it->points.back().east, it->points.back().north);
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& [x0, y0] = poly[i];
        const auto& [x1, y1] = poly[(i + 1) % poly.size()];
        twice += x0 * y1 - x1 * y0;
    }
    const double polygon = std::fabs(twice) / 2.0;
    const double raster = static_cast<double>(g.mosaic->valid_count()) * 0.05 * 0.05;
    EXPECT_NEAR(raster / polygon, 1.0, 0.03);
    EXPECT_NEAR(polygon, 35.19 * (399 * 5.0 / 249.0), 0.5);
}
