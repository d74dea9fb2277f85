#pragma once

// Air side: four stage workers (save, calibrate, detect, transmit) each
// owning one cube at a time, joined by bounded hand-offs. At most
// queue_depth cubes are alive between acquisition and transmission.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skyrx/calibrate.hpp"
#include "skyrx/channel.hpp"
#include "skyrx/evaluate.hpp"
#include "skyrx/fec.hpp"
#include "skyrx/rx.hpp"
#include "skyrx/synth.hpp"

namespace skyrx {

struct PipelineConfig {
    SceneSpec scene;
    FlightSpec flight;
    std::uint64_t seed = 1;
    ChannelModel channel;
    std::uint32_t bin_factor = kDefaultBinFactor;
    double threshold = kDefaultThreshold;
    std::optional<double> gsd;
    std::string out_dir;            // raw cubes and masks go here; empty skips the writes
    std::uint32_t workers = 4;      // 4 = one thread per stage, 1 = everything on the caller
    std::uint32_t queue_depth = 3;  // cubes in flight
    std::uint16_t port = 8080;

    // Throws InvalidInput naming the first broken invariant.
    void validate() const;
};

PipelineConfig default_config(std::uint32_t cubes = 3);

using FrameSink = std::function<void(const Frame&)>;

struct AirHooks {
    // Runs on the calibrate worker after binning; used for fault injection.
    std::function<void(std::uint32_t cube_id, RadianceCube&)> post_calibrate;
    std::function<void(const std::string&)> diagnostic;
};

struct AirReport {
    std::vector<StageTiming> timings;           // one per delivered cube, in order
    std::vector<std::uint32_t> failed_cubes;
    std::vector<std::string> diagnostics;
    std::vector<GroundTruthMask> masks;         // indexed by cube id
    std::size_t frames = 0;
    std::size_t max_in_flight = 0;
};

// Line packets plus FEC parity for one cube, 50 data frames then 25 parity
// frames per group. Group ids are cube_id * (lines / 50) + group.
std::vector<Frame> packetize_cube(const RgbImage& rgb, const ScoreMap& scores, std::span<const LineMeta> meta,
                                  std::uint32_t cube_id, const ReedSolomon& codec = ReedSolomon());

// Frames reach `sink` in stream order on the transmit worker.
AirReport run_air(const PipelineConfig& config, const FrameSink& sink, const AirHooks& hooks = {});

// Wraps a sink so only frames surviving the configured channel reach it.
FrameSink through_channel(const ChannelModel& model, FrameSink sink);

}  // namespace skyrx
