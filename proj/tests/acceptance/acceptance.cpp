// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.
// Tolerances are fixed here on purpose; do not loosen them to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "skyrx/assemble.hpp"
#include "skyrx/calibrate.hpp"
#include "skyrx/channel.hpp"
#include "skyrx/evaluate.hpp"
#include "skyrx/fec.hpp"
#include "skyrx/ground.hpp"
#include "skyrx/packet.hpp"
#include "skyrx/pipeline.hpp"
#include "skyrx/rx.hpp"

using namespace skyrx;

namespace {

constexpr double kRxRelTol = 1e-6;
constexpr double kRxSeconds = 10.0;
constexpr double kAffineRelTol = 1e-4;
constexpr int kFecPatterns = 100;
constexpr double kFecSeconds = 30.0;
constexpr double kEncodingAucTol = 1e-5;
constexpr double kRateTol = 0.01;
constexpr double kLatencyTol = 0.01;
constexpr double kMinAuc = 0.95;
constexpr double kMaxAucDrop = 0.02;
constexpr double kLossRate = 0.05;
constexpr double kEndToEndSeconds = 120.0;
constexpr double kSwathMeters = 35.19;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(bool ok, const char* name, const std::string& detail) {
    std::printf("%s  %-28s %s\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    failures += ok ? 0 : 1;
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// Guards a criterion so an exception becomes a FAIL line, not a crash.
void criterion(const char* name, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        report(false, name, std::string("threw: ") + e.what());
    }
}

void rx_oracle() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> side(8, 32), nb(2, 8);
    double worst = 0.0;
    for (int c = 0; c < 20; ++c) {
        const std::size_t n = static_cast<std::size_t>(side(rng)) * side(rng);
        const std::size_t bands = static_cast<std::size_t>(nb(rng));
        const auto px = oracle::gaussian_pixels(n, bands, rng);
        const auto got = rx_scores(px, bands, compute_stats(px, bands));
        const auto want = oracle::mahalanobis(px, bands);
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, oracle::rel_err(got[i], want[i]));
    }
    const double secs = since(t0);
    report(worst <= kRxRelTol && secs < kRxSeconds, "rx_oracle_equivalence",
           fmt("20 cubes, max rel err %.2e (tol %.0e), %.2f s (limit %.0f s)", worst, kRxRelTol, secs, kRxSeconds));
}

void affine_invariance() {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int c = 0; c < 10; ++c) {
        const std::size_t bands = 3 + c % 6, n = 600;
        const auto px = oracle::gaussian_pixels(n, bands, rng);
        Eigen::MatrixXd a(bands, bands);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = u(rng);
        a.diagonal().array() += 2.5;
        Eigen::VectorXd off(bands);
        for (auto& v : off) v = 50.0 * u(rng);
        std::vector<float> moved(px.size());
        for (std::size_t p = 0; p < n; ++p) {
            Eigen::VectorXd s(bands);
            for (std::size_t b = 0; b < bands; ++b) s[b] = px[p * bands + b];
            const Eigen::VectorXd t = a * s + off;
            for (std::size_t b = 0; b < bands; ++b) moved[p * bands + b] = static_cast<float>(t[b]);
        }
        const auto d0 = rx_scores(px, bands, compute_stats(px, bands));
        const auto d1 = rx_scores(moved, bands, compute_stats(moved, bands));
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, oracle::rel_err(d0[i], d1[i]));
    }
    report(worst <= kAffineRelTol, "rx_affine_invariance",
           fmt("10 cubes, max rel change %.2e (tol %.0e)", worst, kAffineRelTol));
}

void fec_recovery() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(5);
    std::vector<Frame> data;
    for (std::uint32_t i = 0; i < kFecData; ++i) {
        Frame f{0, static_cast<std::uint8_t>(i), FrameKind::Data, std::vector<std::uint8_t>(kPacketBytes)};
        for (auto& b : f.payload) b = static_cast<std::uint8_t>(rng());
        data.push_back(std::move(f));
    }
    std::vector<Frame> all = data;
    for (auto& p : fec_encode(data)) all.push_back(std::move(p));

    int exact25 = 0, honest26 = 0;
    std::vector<std::uint32_t> idx(kFecData + kFecParity);
    std::iota(idx.begin(), idx.end(), 0u);
    for (int t = 0; t < kFecPatterns; ++t) {
        for (std::size_t drop : {std::size_t{25}, std::size_t{26}}) {
            std::shuffle(idx.begin(), idx.end(), rng);
            const std::set<std::uint32_t> lost(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(drop));
            std::vector<Frame> got;
            for (const Frame& f : all) {
                if (!lost.count(f.index)) got.push_back(f);
            }
            const FecDecodeResult r = fec_decode(got);
            bool ok = true;
            for (std::uint32_t i = 0; i < kFecData; ++i) {
                const bool should_have = drop == 25 || !lost.count(i);
                if (r.data[i].has_value() != should_have) ok = false;
                if (r.data[i] && *r.data[i] != data[i].payload) ok = false;
            }
            if (drop == 25) {
                exact25 += ok && r.complete;
            } else {
                honest26 += ok && !r.complete && r.recovered.empty();
            }
        }
    }
    const double secs = since(t0);
    report(exact25 == kFecPatterns && honest26 == kFecPatterns && secs < kFecSeconds, "fec_any_50_of_75",
           fmt("25 erasures exact %d/%d, 26 erasures received-only %d/%d, %.2f s (limit %.0f s)", exact25,
               kFecPatterns, honest26, kFecPatterns, secs, kFecSeconds));
}

void bandwidth() {
    const LinkBudget b = link_budget();
    const bool ok = std::fabs(b.payload_mbps - 7.17) <= kRateTol && std::fabs(b.packets_mbps - 7.43) <= kRateTol &&
                    b.total_mbps >= 11.1 && b.total_mbps <= 11.5;
    report(ok, "bandwidth_accounting",
           fmt("payload %.4f, packets %.4f, total %.4f Mbit/s", b.payload_mbps, b.packets_mbps, b.total_mbps));
}

void latency() {
    const std::vector<StageTiming> table = {{0, 2.93, 2.49, 1.78, 3.38}};
    const LatencyReport r = latency_report(table);
    // Flag follows "every stage mean below acquisition" on both sides of the boundary.
    const double acq = kAcquisitionSeconds;
    const std::vector<StageTiming> under = {{0, acq - 1e-6, 1, 1, 1}};
    const std::vector<StageTiming> over = {{0, 1, 1, 1, acq + 1e-6}};
    const std::vector<StageTiming> slow = {{0, 1, 5.0, 1, 1}};
    const bool flags = latency_report(under).real_time && !latency_report(over).real_time &&
                       !latency_report(slow).real_time && r.real_time;
    report(std::fabs(r.latency_s - 14.60) <= kLatencyTol && flags, "latency_accounting",
           fmt("latency %.4f s (want 14.60 +/- %.2f), real-time flag rule %s", r.latency_s, kLatencyTol,
               flags ? "holds" : "broken"));
}

struct FullRun {
    std::vector<Frame> frames;
    AirReport air;
    double air_s = 0.0;
};

// One full-size cube through the threaded air pipeline.
FullRun full_scale_air() {
    PipelineConfig cfg = default_config(1);
    cfg.seed = 11;
    FullRun run;
    const auto t0 = Clock::now();
    run.air = run_air(cfg, [&](const Frame& f) { run.frames.push_back(f); });
    run.air_s = since(t0);
    return run;
}

void encoding_fidelity(const FullRun& run) {
    // Recompute the float scores the air side transmitted.
    PipelineConfig cfg = default_config(1);
    cfg.seed = 11;
    FlightSynthesizer syn(cfg.scene, cfg.flight, cfg.seed);
    const SynthCube sc = syn.cube(0);
    const RadianceCube binned = calibrate_and_bin(sc.cube, syn.tables(), cfg.bin_factor);
    const ScoreMap raw = rx_scores(binned, compute_stats(binned));

    const GroundResult g = run_ground(run.frames);
    const RocCurve f32 = roc_curve(raw, sc.mask);
    const RocCurve half = roc_curve(g.cubes.at(0), sc.mask);
    const double delta = std::fabs(auc_delta(half, f32));
    report(delta <= kEncodingAucTol && g.cubes[0].completion() == 1.0, "encoding_fidelity",
           fmt("1000x900 cube, AUC f32 %.8f vs half %.8f, rel diff %.2e (tol %.0e)", f32.auc, half.auc, delta,
               kEncodingAucTol));
}

void end_to_end(const FullRun& run) {
    const auto t0 = Clock::now();
    const GroundTruthMask& mask = run.air.masks.at(0);
    const double coverage = static_cast<double>(mask.count()) / static_cast<double>(mask.values.size());
    const GroundResult clean = run_ground(run.frames);
    const GroundResult lossy = run_ground(channel_transmit(run.frames, ChannelModel::bernoulli(kLossRate, 3)));
    const double auc0 = roc_curve(clean.cubes.at(0), mask).auc;
    const double auc5 = roc_curve(lossy.cubes.at(0), mask).auc;
    const double drop = (auc0 - auc5) / auc0;
    const double secs = run.air_s + since(t0);
    const bool ok = auc0 >= kMinAuc && drop <= kMaxAucDrop && secs < kEndToEndSeconds && run.air.failed_cubes.empty();
    report(ok, "end_to_end_detection",
           fmt("anomalies %.2f%% of pixels, AUC lossless %.4f (min %.2f), 5%% loss %.4f (completion %.3f), "
               "drop %.2e (max %.2f), %.1f s (limit %.0f s)",
               100.0 * coverage, auc0, kMinAuc, auc5, lossy.cubes.at(0).completion(), drop, kMaxAucDrop, secs,
               kEndToEndSeconds));
}

void missing_lines(const FullRun& run) {
    // Lines 500-549 are exactly group 10; losing all 75 frames leaves nothing to rebuild from.
    std::vector<Frame> kept;
    for (const Frame& f : run.frames) {
        if (f.group_id != 10) kept.push_back(f);
    }
    const GroundResult g = run_ground(kept);
    const ReceivedCube& c = g.cubes.at(0);
    bool black = true, flagged = true, others = true;
    for (std::uint32_t l = 0; l < c.lines; ++l) {
        const bool gap = l >= 500 && l < 550;
        if (c.present(l) == gap) (gap ? flagged : others) = false;
        if (!gap) continue;
        for (std::uint32_t s = 0; s < c.samples; ++s) {
            const std::size_t p = static_cast<std::size_t>(l) * c.samples + s;
            if (c.scores[p] != 0.0f || c.display[p] != 0.0f || c.rgb[3 * p] != 0.0f || c.rgb[3 * p + 1] != 0.0f ||
                c.rgb[3 * p + 2] != 0.0f) {
                black = false;
            }
        }
    }
    const auto lost = c.lost_pixels();
    const auto n_lost = static_cast<std::size_t>(std::count(lost.begin(), lost.end(), std::uint8_t{1}));
    report(black && flagged && others && c.completion() == 0.95 && n_lost == 50u * c.samples, "missing_line_contract",
           fmt("lines 500-549: black+zero %s, flagged %s, completion %.4f", black ? "yes" : "no",
               flagged && others ? "yes" : "no", c.completion()));
}

void georectification() {
    PipelineConfig cfg = fixture::small_config(1, 200, 900, 40);
    cfg.flight.roll_amp_deg = cfg.flight.pitch_amp_deg = cfg.flight.yaw_amp_deg = 0.0;
    std::vector<Frame> frames;
    run_air(cfg, [&](const Frame& f) { frames.push_back(f); });
    GroundConfig gc;
    gc.origin = cfg.flight.origin;
    const GroundResult g = run_ground(frames, gc);
    const Raster& r = *g.mosaic;

    // Centre-to-centre distance between the outermost valid cells of a row.
    double swath = 0.0;
    for (std::uint32_t row = 0; row < r.height; ++row) {
        std::int64_t lo = -1, hi = -1;
        for (std::uint32_t col = 0; col < r.width; ++col) {
            if (!r.valid[r.cell(row, col)]) continue;
            if (lo < 0) lo = col;
            hi = col;
        }
        if (lo >= 0) swath = std::max(swath, static_cast<double>(hi - lo) * r.gsd);
    }

    const ReceivedCube& c = g.cubes.at(0);
    std::set<float> scores(c.display.begin(), c.display.end());
    std::set<std::array<float, 3>> colors;
    for (std::size_t p = 0; p < c.display.size(); ++p) colors.insert({c.rgb[3 * p], c.rgb[3 * p + 1], c.rgb[3 * p + 2]});
    std::size_t invented = 0;
    for (std::size_t i = 0; i < r.valid.size(); ++i) {
        if (!r.valid[i]) continue;
        if (!scores.count(r.score[i]) || !colors.count({r.rgb[3 * i], r.rgb[3 * i + 1], r.rgb[3 * i + 2]})) ++invented;
    }
    report(std::fabs(swath - kSwathMeters) <= r.gsd && invented == 0, "georectification_geometry",
           fmt("swath %.3f m (want %.2f +/- gsd %.4f), %zu valid cells, %zu with values not in the source", swath,
               kSwathMeters, r.gsd, r.valid_count(), invented));
}

}  // namespace

int main() {
    criterion("rx_oracle_equivalence", rx_oracle);
    criterion("rx_affine_invariance", affine_invariance);
    criterion("fec_any_50_of_75", fec_recovery);
    criterion("bandwidth_accounting", bandwidth);
    criterion("latency_accounting", latency);
    try {
        const FullRun run = full_scale_air();
        criterion("encoding_fidelity", [&] { encoding_fidelity(run); });
        criterion("end_to_end_detection", [&] { end_to_end(run); });
        criterion("missing_line_contract", [&] { missing_lines(run); });
    } catch (const std::exception& e) {
        for (const char* n : {"encoding_fidelity", "end_to_end_detection", "missing_line_contract"}) {
            report(false, n, std::string("full-scale run threw: ") + e.what());
        }
    }
    criterion("georectification_geometry", georectification);
    std::printf("NOTE  flight AUCs (0.60-0.83) and flight reception rates (97.91%%) need the original flight data "
                "and hardware; the synthetic criteria above stand in for them\n");
    std::printf("%s  %d failing\n", failures == 0 ? "ALL PASS" : "SOME FAIL", failures);
    return failures == 0 ? 0 : 1;
}
