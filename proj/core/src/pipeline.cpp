#include "skyrx/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <semaphore>
#include <thread>

#include "skyrx/bounded_queue.hpp"
#include "skyrx/formats.hpp"

namespace skyrx {

void PipelineConfig::validate() const {
    if (queue_depth < 1) throw InvalidInput("config: queue_depth must be >= 1");
    if (workers != 1 && workers != 4) throw InvalidInput("config: workers must be 1 or 4");
    if (bin_factor == 0 || flight.bands_in_range % bin_factor != 0) {
        throw InvalidInput("config: bin factor " + std::to_string(bin_factor) + " does not divide " +
                           std::to_string(flight.bands_in_range) + " in-range bands");
    }
    if (flight.lines_per_cube % kFecData != 0) {
        throw InvalidInput("config: lines_per_cube must be a multiple of " + std::to_string(kFecData));
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw InvalidInput("config: threshold must lie in [0, 1]");
    if (gsd && !(*gsd > 0.0)) throw InvalidInput("config: gsd must be > 0");
}

PipelineConfig default_config(std::uint32_t cubes) {
    PipelineConfig c;
    c.flight = default_flight(cubes);
    c.scene = default_scene(c.flight);
    return c;
}

std::vector<Frame> packetize_cube(const RgbImage& rgb, const ScoreMap& scores, std::span<const LineMeta> meta,
                                  std::uint32_t cube_id, const ReedSolomon& codec) {
    const std::uint32_t lines = scores.lines;
    const std::uint32_t k = codec.data_count();
    if (rgb.lines != lines || rgb.samples != scores.samples || meta.size() != lines) {
        throw InvalidInput("packetize: rgb, scores and line metadata disagree on shape");
    }
    if (lines == 0 || lines % k != 0) {
        throw InvalidInput("packetize: " + std::to_string(lines) + " lines is not a whole number of groups");
    }

    PacketHeader h;
    h.cube_id = cube_id;
    h.lines_per_cube = lines;
    h.samples = scores.samples;
    h.max_score = scores.max_score;
    for (std::size_t i = 0; i < rgb.values.size(); i += 3) {
        h.max_r = std::max(h.max_r, rgb.values[i]);
        h.max_g = std::max(h.max_g, rgb.values[i + 1]);
        h.max_b = std::max(h.max_b, rgb.values[i + 2]);
    }

    const std::uint32_t groups = lines / k;
    std::vector<Frame> out;
    out.reserve(static_cast<std::size_t>(groups) * (k + codec.parity_count()));
    const std::size_t s = scores.samples;
    for (std::uint32_t g = 0; g < groups; ++g) {
        const std::uint32_t gid = cube_id * groups + g;
        const std::size_t first = out.size();
        for (std::uint32_t i = 0; i < k; ++i) {
            const std::uint32_t l = g * k + i;
            h.line_index = l;
            h.exposure_start_us = meta[l].exposure_start_us;
            h.ins_before = meta[l].ins_before;
            h.ins_after = meta[l].ins_after;
            const std::size_t px = static_cast<std::size_t>(l) * s;
            out.push_back({gid, static_cast<std::uint8_t>(i), FrameKind::Data,
                           encode_line(std::span(rgb.values).subspan(3 * px, 3 * s),
                                       std::span(scores.values).subspan(px, s), h)});
        }
        auto parity = fec_encode(std::span(out).subspan(first, k), codec);
        for (Frame& f : parity) out.push_back(std::move(f));
    }
    return out;
}

FrameSink through_channel(const ChannelModel& model, FrameSink sink) {
    auto ch = std::make_shared<Channel>(model);
    return [ch, sink = std::move(sink)](const Frame& f) {
        if (ch->survives()) sink(f);
    };
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct SavedCube {
    std::uint32_t id = 0;
    RawCube raw;
    StageTiming timing;
};

struct CalibratedCube {
    std::uint32_t id = 0;
    RadianceCube binned;
    RgbImage rgb;
    StageTiming timing;
};

struct DetectedCube {
    std::uint32_t id = 0;
    RgbImage rgb;
    ScoreMap scores;
    std::vector<LineMeta> meta;
    StageTiming timing;
};

// Everything the stage bodies share; the mutex only guards the report.
class AirRun {
public:
    AirRun(const PipelineConfig& cfg, const FrameSink& sink, const AirHooks& hooks)
        : cfg_(cfg), sink_(sink), hooks_(hooks), synth_(cfg.scene, cfg.flight, cfg.seed),
          slots_(static_cast<std::ptrdiff_t>(cfg.queue_depth)) {
        report_.masks.resize(cfg.flight.cubes);
        if (!cfg_.out_dir.empty()) {
            std::filesystem::create_directories(cfg_.out_dir);
            write_track(path("track.hst"), synth_.track());
            write_tables(path("tables.hsk"), synth_.tables());
        }
    }

    std::optional<SavedCube> save(std::uint32_t id) {
        slots_.acquire();
        note_in_flight(+1);
        return guarded(id, "save", [&]() -> SavedCube {
            SynthCube sc = synth_.cube(id);
            {
                std::lock_guard lock(mu_);
                report_.masks[id] = std::move(sc.mask);
            }
            const auto t0 = Clock::now();
            if (!cfg_.out_dir.empty()) {
                const std::string name = "cube_" + std::to_string(id);
                std::ofstream out(path(name + ".hsc"), std::ios::binary | std::ios::trunc);
                if (!out) throw std::runtime_error("cannot open " + path(name + ".hsc"));
                write_cube(out, sc.cube);
                write_mask(path(name + ".hsm"), report_.masks[id]);
            }
            SavedCube s{id, std::move(sc.cube), {}};
            s.timing.cube_id = id;
            s.timing.save_s = seconds_since(t0);
            return s;
        });
    }

    std::optional<CalibratedCube> calibrate(SavedCube s) {
        return guarded(s.id, "calibrate", [&]() -> CalibratedCube {
            const auto t0 = Clock::now();
            CalibratedCube c{s.id, calibrate_and_bin(s.raw, synth_.tables(), cfg_.bin_factor), {}, s.timing};
            s.raw = RawCube();
            if (hooks_.post_calibrate) hooks_.post_calibrate(s.id, c.binned);
            c.rgb = extract_rgb(c.binned);
            c.timing.calibrate_s = seconds_since(t0);
            return c;
        });
    }

    std::optional<DetectedCube> detect(CalibratedCube c) {
        return guarded(c.id, "detect", [&]() -> DetectedCube {
            const auto t0 = Clock::now();
            const CubeStats stats = compute_stats(c.binned);
            DetectedCube d{c.id, std::move(c.rgb), rx_scores(c.binned, stats), std::move(c.binned.line_meta()),
                           c.timing};
            c.binned = RadianceCube();
            d.timing.detect_s = seconds_since(t0);
            return d;
        });
    }

    void transmit(DetectedCube d) {
        guarded(d.id, "transmit", [&]() -> bool {
            const auto t0 = Clock::now();
            const std::vector<Frame> frames = packetize_cube(d.rgb, d.scores, d.meta, d.id, codec_);
            for (const Frame& f : frames) sink_(f);
            d.timing.transmit_s = seconds_since(t0);
            std::lock_guard lock(mu_);
            report_.frames += frames.size();
            report_.timings.push_back(d.timing);
            return true;
        });
        release();
    }

    // A failed stage frees its slot; later stages never see the cube.
    void release() {
        note_in_flight(-1);
        slots_.release();
    }

    AirReport take_report() { return std::move(report_); }

private:
    template <typename F>
    auto guarded(std::uint32_t id, const char* stage, F&& body) -> std::optional<decltype(body())> {
        try {
            return body();
        } catch (const std::exception& e) {
            const std::string msg = "cube " + std::to_string(id) + ": " + stage + " failed: " + e.what();
            {
                std::lock_guard lock(mu_);
                report_.failed_cubes.push_back(id);
                report_.diagnostics.push_back(msg);
            }
            if (hooks_.diagnostic) hooks_.diagnostic(msg);
            if (std::string_view(stage) != "transmit") release();
            return std::nullopt;
        }
    }

    void note_in_flight(int delta) {
        std::lock_guard lock(mu_);
        in_flight_ += delta;
        report_.max_in_flight = std::max(report_.max_in_flight, in_flight_);
    }

    std::string path(const std::string& name) const { return (std::filesystem::path(cfg_.out_dir) / name).string(); }

    const PipelineConfig& cfg_;
    const FrameSink& sink_;
    const AirHooks& hooks_;
    FlightSynthesizer synth_;
    ReedSolomon codec_;
    std::counting_semaphore<> slots_;
    std::mutex mu_;
    AirReport report_;
    std::size_t in_flight_ = 0;
};

}  // namespace

AirReport run_air(const PipelineConfig& config, const FrameSink& sink, const AirHooks& hooks) {
    config.validate();
    AirRun run(config, sink, hooks);
    const std::uint32_t n = config.flight.cubes;

    if (config.workers == 1) {
        for (std::uint32_t id = 0; id < n; ++id) {
            auto s = run.save(id);
            if (!s) continue;
            auto c = run.calibrate(std::move(*s));
            if (!c) continue;
            auto d = run.detect(std::move(*c));
            if (!d) continue;
            run.transmit(std::move(*d));
        }
        return run.take_report();
    }

    const std::size_t depth = config.queue_depth;
    BoundedQueue<SavedCube> to_calibrate(depth);
    BoundedQueue<CalibratedCube> to_detect(depth);
    BoundedQueue<DetectedCube> to_transmit(depth);

    std::jthread saver([&] {
        for (std::uint32_t id = 0; id < n; ++id) {
            if (auto s = run.save(id)) to_calibrate.push(std::move(*s));
        }
        to_calibrate.close();
    });
    std::jthread calibrator([&] {
        while (auto s = to_calibrate.pop()) {
            if (auto c = run.calibrate(std::move(*s))) to_detect.push(std::move(*c));
        }
        to_detect.close();
    });
    std::jthread detector([&] {
        while (auto c = to_detect.pop()) {
            if (auto d = run.detect(std::move(*c))) to_transmit.push(std::move(*d));
        }
        to_transmit.close();
    });
    std::jthread transmitter([&] {
        while (auto d = to_transmit.pop()) run.transmit(std::move(*d));
    });

    saver.join();
    calibrator.join();
    detector.join();
    transmitter.join();
    return run.take_report();
}

}  // namespace skyrx
