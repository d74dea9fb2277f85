// skyrx: synthetic push-broom flights through the air pipeline, the lossy
// link and the ground station.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "service.hpp"
#include "skyrx/assemble.hpp"
#include "skyrx/evaluate.hpp"
#include "skyrx/formats.hpp"
#include "skyrx/frame_stream.hpp"
#include "skyrx/ground.hpp"
#include "skyrx/pipeline.hpp"
#include "skyrx/raster.hpp"
#include "skyrx/synth.hpp"

namespace fs = std::filesystem;
using namespace skyrx;

namespace {

struct Options {
    std::string scene;
    std::string flight;
    std::uint64_t seed = 1;
    std::optional<std::uint32_t> cubes;
    std::string channel;
    std::uint32_t bin = kDefaultBinFactor;
    double threshold = kDefaultThreshold;
    std::optional<double> gsd;
    std::string out = "skyrx_out";
    std::uint16_t port = 8080;
    std::string replay;
    std::uint32_t queue_depth = 3;
    std::uint32_t workers = 4;
    bool realtime = false;
};

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::string in_dir(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

PipelineConfig make_config(const Options& o) {
    PipelineConfig c;
    c.flight = o.flight.empty() ? default_flight(3) : load_flight(o.flight);
    if (o.cubes) c.flight.cubes = *o.cubes;
    c.scene = o.scene.empty() ? default_scene(c.flight) : load_scene(o.scene);
    c.seed = o.seed;
    if (!o.channel.empty()) c.channel = parse_channel(o.channel, o.seed);
    c.bin_factor = o.bin;
    c.threshold = o.threshold;
    c.gsd = o.gsd;
    c.out_dir = o.out;
    c.port = o.port;
    c.queue_depth = o.queue_depth;
    c.workers = o.workers;
    c.validate();
    return c;
}

GroundConfig ground_config(const Options& o, const GeoOrigin& origin) {
    GroundConfig g;
    g.origin = origin;
    g.gsd = o.gsd;
    return g;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
}

void write_ground_outputs(const std::string& dir, const GroundStation& st) {
    fs::create_directories(dir);
    const auto cubes = st.cubes();
    for (const ReceivedCube& c : cubes) write_received(in_dir(dir, "received_" + std::to_string(c.cube_id) + ".hsr"), c);
    if (const auto m = st.mosaic()) {
        write_raster_png(in_dir(dir, "mosaic.png"), *m);
        write_score_png(in_dir(dir, "score.png"), *m);
        export_raster_f32(in_dir(dir, "mosaic"), *m);
    }
    const GroundCounters k = st.counters();
    std::cout << "frames " << k.frames << ", malformed " << k.malformed << ", duplicates " << k.duplicates
              << ", late " << k.late << ", recovered lines " << k.recovered << "\n";
    for (const ReceivedCube& c : cubes) {
        std::cout << "cube " << c.cube_id << ": completion " << c.completion() << "\n";
    }
    if (!cubes.empty()) {
        const ReceptionStats r = reception_stats(cubes);
        std::cout << "reception: mean " << r.mean_pct << "%, std " << r.std_pct << "%, complete "
                  << 100.0 * r.complete_fraction << "%\n";
    }
}

std::vector<StageTiming> read_timings(const std::string& path) {
    std::ifstream f(path);
    std::vector<StageTiming> out;
    std::string line;
    std::getline(f, line);  // header
    while (std::getline(f, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream is(line);
        StageTiming t;
        if (is >> t.cube_id >> t.save_s >> t.calibrate_s >> t.detect_s >> t.transmit_s) out.push_back(t);
    }
    return out;
}

void write_air_outputs(const std::string& dir, const AirReport& rep) {
    {
        std::ofstream f(in_dir(dir, "timings.csv"));
        write_timings_csv(f, rep.timings);
    }
    if (!rep.timings.empty()) {
        const LatencyReport lr = latency_report(rep.timings);
        std::ofstream f(in_dir(dir, "latency.csv"));
        write_latency_csv(f, lr);
        std::cout << summary_text(lr);
    }
    std::cout << "frames sent " << rep.frames << ", cubes failed " << rep.failed_cubes.size() << "\n";
}

int cmd_synth(const Options& o) {
    const PipelineConfig c = make_config(o);
    fs::create_directories(o.out);
    FlightSynthesizer synth(c.scene, c.flight, c.seed);
    write_track(in_dir(o.out, "track.hst"), synth.track());
    write_tables(in_dir(o.out, "tables.hsk"), synth.tables());
    write_text(in_dir(o.out, "scene.json"), scene_to_json(c.scene));
    write_text(in_dir(o.out, "flight.json"), flight_to_json(c.flight));
    for (std::uint32_t id = 0; id < synth.cube_count(); ++id) {
        SynthCube sc = synth.cube(id);
        write_cube(in_dir(o.out, "cube_" + std::to_string(id) + ".hsc"), sc.cube);
        write_mask(in_dir(o.out, "cube_" + std::to_string(id) + ".hsm"), sc.mask);
        std::cout << "cube " << id << ": " << sc.mask.count() << " anomalous pixels\n";
    }
    return 0;
}

int cmd_air(const Options& o) {
    const PipelineConfig c = make_config(o);
    fs::create_directories(o.out);
    FrameStreamWriter w(in_dir(o.out, "stream.fst"));
    AirHooks hooks;
    hooks.diagnostic = [](const std::string& m) { std::cerr << m << "\n"; };
    const AirReport rep = run_air(c, through_channel(c.channel, [&](const Frame& f) { w.write(f); }), hooks);
    w.flush();
    write_air_outputs(o.out, rep);
    return rep.failed_cubes.empty() ? 0 : 2;
}

int cmd_ground(const Options& o) {
    if (o.replay.empty()) throw InvalidInput("ground needs --replay <file.fst>");
    GroundStation st(ground_config(o, o.flight.empty() ? GeoOrigin{} : load_flight(o.flight).origin));
    for (const auto& rec : read_frame_records(o.replay)) st.ingest_record(rec);
    st.finish();
    write_ground_outputs(o.out, st);
    return 0;
}

int cmd_run(const Options& o) {
    const PipelineConfig c = make_config(o);
    fs::create_directories(o.out);
    std::vector<Frame> frames;
    AirHooks hooks;
    hooks.diagnostic = [](const std::string& m) { std::cerr << m << "\n"; };
    const AirReport rep = run_air(c, through_channel(c.channel, [&](const Frame& f) { frames.push_back(f); }), hooks);
    write_frame_stream(in_dir(o.out, "stream.fst"), frames);
    write_air_outputs(o.out, rep);

    GroundStation st(ground_config(o, c.flight.origin));
    for (const Frame& f : frames) st.ingest(f);
    st.finish();
    write_ground_outputs(o.out, st);
    for (const ReceivedCube& cube : st.cubes()) {
        const GroundTruthMask& mask = rep.masks.at(cube.cube_id);
        if (mask.count() == 0 || mask.count() == mask.values.size()) continue;
        std::cout << "cube " << cube.cube_id << ": AUC " << roc_curve(cube, mask).auc << "\n";
    }
    return rep.failed_cubes.empty() ? 0 : 2;
}

int cmd_eval(const Options& o) {
    const std::regex name(R"(received_(\d+)\.hsr)");
    std::vector<ReceivedCube> cubes;
    for (const auto& entry : fs::directory_iterator(o.out)) {
        if (std::regex_match(entry.path().filename().string(), name)) cubes.push_back(read_received(entry.path()));
    }
    if (cubes.empty()) throw InvalidInput("no received_*.hsr files in " + o.out);
    std::sort(cubes.begin(), cubes.end(), [](const auto& a, const auto& b) { return a.cube_id < b.cube_id; });

    for (const ReceivedCube& c : cubes) {
        const std::string id = std::to_string(c.cube_id);
        ScoreMap display{c.lines, c.samples, c.display, 1.0f};
        const GroundTruthMask hits = threshold_scores(display, o.threshold);
        std::vector<std::uint8_t> img(hits.values.size());
        for (std::size_t i = 0; i < img.size(); ++i) img[i] = hits.values[i] ? 0 : 255;
        write_file_bytes(in_dir(o.out, "threshold_" + id + ".png"), encode_png_gray8(c.samples, c.lines, img));
        std::cout << "cube " << id << ": completion " << c.completion() << ", " << hits.count()
                  << " pixels above " << o.threshold;

        const std::string mask_path = in_dir(o.out, "cube_" + id + ".hsm");
        if (fs::exists(mask_path)) {
            const GroundTruthMask mask = read_mask(mask_path);
            const RocCurve roc = roc_curve(c, mask);
            std::ofstream f(in_dir(o.out, "roc_" + id + ".csv"));
            write_roc_csv(f, roc);
            std::cout << ", AUC " << roc.auc;
        }
        std::cout << "\n";
    }
    const ReceptionStats r = reception_stats(cubes);
    std::cout << "reception: mean " << r.mean_pct << "%, std " << r.std_pct << "%, complete "
              << 100.0 * r.complete_fraction << "%\n";
    const std::string timings = in_dir(o.out, "timings.csv");
    if (fs::exists(timings)) {
        const auto t = read_timings(timings);
        if (!t.empty()) std::cout << summary_text(latency_report(t));
    }
    return 0;
}

int cmd_serve(const Options& o) {
    auto st = std::make_shared<GroundStation>(
        ground_config(o, o.flight.empty() ? GeoOrigin{} : load_flight(o.flight).origin));
    MapService svc(st);
    svc.start("0.0.0.0", o.port);
    std::cout << "serving on port " << svc.port() << std::endl;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);

    if (!o.replay.empty()) {
        // Frames leave the air side at 1.5 x the line rate.
        const auto period = std::chrono::duration<double>(1.0 / (1.5 * kLineRateHz));
        auto next = std::chrono::steady_clock::now();
        for (const auto& rec : read_frame_records(o.replay)) {
            if (g_stop) break;
            st->ingest_record(rec);
            if (o.realtime) {
                next += std::chrono::duration_cast<std::chrono::steady_clock::duration>(period);
                std::this_thread::sleep_until(next);
            }
        }
        st->finish();
        std::cout << "replay done: " << st->cube_status().size() << " cubes" << std::endl;
    }
    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    svc.stop();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"skyrx: push-broom hyperspectral anomaly detection with a lossy downlink"};
    app.require_subcommand(1);
    Options o;

    auto common = [&](CLI::App* c) {
        c->add_option("--scene", o.scene, "scene JSON (default: built-in scene)")->check(CLI::ExistingFile);
        c->add_option("--flight", o.flight, "flight JSON (default: built-in 3-cube flight)")->check(CLI::ExistingFile);
        c->add_option("--seed", o.seed, "random seed");
        c->add_option("--cubes", o.cubes, "override the number of cubes");
        c->add_option("--out", o.out, "output directory");
    };
    auto link = [&](CLI::App* c) {
        c->add_option("--channel", o.channel, "bernoulli:<p> or ge:<pgb>,<pbg>,<lg>,<lb>");
        c->add_option("--bin", o.bin, "band binning factor");
        c->add_option("--threshold", o.threshold, "display threshold on the sqrt-normalized score");
        c->add_option("--queue-depth", o.queue_depth, "cubes in flight");
        c->add_option("--workers", o.workers, "4 = threaded stages, 1 = serial");
    };
    auto gsd = [&](CLI::App* c) { c->add_option("--gsd", o.gsd, "raster ground sample distance in meters"); };

    auto* synth = app.add_subcommand("synth", "render raw cubes, masks, INS track and calibration tables");
    common(synth);
    auto* air = app.add_subcommand("air", "run the air pipeline and record the transmitted frame stream");
    common(air);
    link(air);
    auto* ground = app.add_subcommand("ground", "assemble and georectify a recorded frame stream");
    common(ground);
    gsd(ground);
    ground->add_option("--replay", o.replay, "frame stream (.fst)")->check(CLI::ExistingFile);
    auto* run = app.add_subcommand("run", "air pipeline, channel and ground station in one process");
    common(run);
    link(run);
    gsd(run);
    auto* eval = app.add_subcommand("eval", "ROC, thresholds, reception and latency for a result directory");
    eval->add_option("--out", o.out, "directory with received_*.hsr and cube_*.hsm")->check(CLI::ExistingDirectory);
    eval->add_option("--threshold", o.threshold, "threshold on the sqrt-normalized score");
    auto* serve = app.add_subcommand("serve", "HTTP tiles and live events for the operator console");
    serve->add_option("--port", o.port, "listen port");
    serve->add_option("--replay", o.replay, "frame stream to feed the ground station")->check(CLI::ExistingFile);
    serve->add_option("--flight", o.flight, "flight JSON, for the geographic origin")->check(CLI::ExistingFile);
    serve->add_flag("--realtime", o.realtime, "pace the replay at the link frame rate");
    gsd(serve);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*synth) return cmd_synth(o);
        if (*air) return cmd_air(o);
        if (*ground) return cmd_ground(o);
        if (*run) return cmd_run(o);
        if (*eval) return cmd_eval(o);
        if (*serve) return cmd_serve(o);
    } catch (const std::exception& e) {
        std::cerr << "skyrx: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
