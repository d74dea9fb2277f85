#pragma once

// Deterministic stand-in for the imager and INS: renders push-broom raw
// cubes of a flat synthetic scene together with the INS track, the sensor's
// calibration tables and per-cube ground-truth masks.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skyrx/cube.hpp"
#include "skyrx/formats.hpp"
#include "skyrx/geo.hpp"

namespace skyrx {

// Piecewise-linear spectrum, clamped beyond the first and last knot.
struct SpectrumTemplate {
    std::vector<std::pair<double, double>> knots;  // (wavelength nm, radiance)

    double at(double nm) const;
};

enum class AnomalyShape { Rectangle, Ellipse };

struct Anomaly {
    AnomalyShape shape = AnomalyShape::Rectangle;
    double center_east = 0.0;
    double center_north = 0.0;
    double size_east = 1.0;
    double size_north = 1.0;
    SpectrumTemplate spectrum;

    bool contains(double east, double north) const noexcept;
};

struct SceneSpec {
    double width_m = 60.0;
    double length_m = 80.0;
    SpectrumTemplate background;
    double noise_sigma = 0.02;    // per-value log-normal sigma
    double texture_sigma = 0.05;  // per-pixel log-normal brightness sigma
    std::vector<Anomaly> anomalies;
    double illumination = 1.0;
};

struct FlightSpec {
    double altitude_m = 40.0;
    double speed_mps = 5.0;
    double heading_deg = 0.0;
    double start_east = 30.0;
    double start_north = 0.0;
    double line_rate_hz = kLineRateHz;
    double ins_rate_hz = 200.0;
    double roll_amp_deg = 0.0, roll_period_s = 3.0;
    double pitch_amp_deg = 0.0, pitch_period_s = 4.0;
    double yaw_amp_deg = 0.0, yaw_period_s = 7.0;
    double gain_min = 1.0, gain_max = 8.0, gain_period_s = 25.0;
    std::uint32_t cubes = 1;
    std::uint32_t lines_per_cube = kDefaultLines;
    std::uint32_t samples = kDefaultSamples;
    std::uint32_t bands_in_range = 280;  // plus 10 below 400 nm and 10 above 1000 nm
    double fov_deg = 47.5;
    std::uint64_t start_time_us = 1'700'000'000'000'000ULL;
    GeoOrigin origin;
};

inline constexpr std::uint32_t kOutOfRangeBandsEachSide = 10;

// Band centers: 10 below 400 nm, `in_range` spaced linearly over [400, 1000], 10 above.
std::vector<float> synthetic_wavelengths(std::uint32_t in_range);

// Fixed dark/coefficient tables of the simulated sensor.
CalibrationTables synthetic_tables(std::uint32_t samples, std::uint32_t bands);

struct SynthCube {
    RawCube cube;
    GroundTruthMask mask;
};

class FlightSynthesizer {
public:
    // Throws InvalidInput when the specs violate their invariants.
    FlightSynthesizer(SceneSpec scene, FlightSpec flight, std::uint64_t seed);

    std::uint32_t cube_count() const noexcept { return flight_.cubes; }
    const std::vector<InsSample>& track() const noexcept { return track_; }
    const CalibrationTables& tables() const noexcept { return tables_; }
    const std::vector<float>& wavelengths() const noexcept { return wavelengths_; }
    const SceneSpec& scene() const noexcept { return scene_; }
    const FlightSpec& flight() const noexcept { return flight_; }
    CameraModel camera() const noexcept { return {flight_.samples, flight_.fov_deg}; }

    std::uint64_t exposure_time_us(std::uint64_t global_line) const noexcept;
    double gain_at(std::uint64_t t_us) const noexcept;
    // Exact platform pose; INS samples are this pose sampled at ins_rate_hz.
    Pose true_pose(std::uint64_t t_us) const noexcept;

    // Renders cube `id` with sub-seed seed ^ id. Safe to call concurrently.
    SynthCube cube(std::uint32_t id) const;

private:
    InsSample ins_at(std::uint64_t t_us) const;

    SceneSpec scene_;
    FlightSpec flight_;
    std::uint64_t seed_;
    std::vector<float> wavelengths_;
    CalibrationTables tables_;
    std::vector<InsSample> track_;
};

struct FlightData {
    std::vector<RawCube> cubes;
    std::vector<GroundTruthMask> masks;
    std::vector<InsSample> track;
    CalibrationTables tables;
};

FlightData generate_flight(const SceneSpec& scene, const FlightSpec& flight, std::uint64_t seed);

// Scene and flight presets used by the CLI and the acceptance suite.
FlightSpec default_flight(std::uint32_t cubes = 3);
SceneSpec default_scene(const FlightSpec& flight);

// JSON (de)serialisation of the specs.
SceneSpec scene_from_json(const std::string& text);
std::string scene_to_json(const SceneSpec& scene);
FlightSpec flight_from_json(const std::string& text);
std::string flight_to_json(const FlightSpec& flight);
SceneSpec load_scene(const std::string& path);
FlightSpec load_flight(const std::string& path);

}  // namespace skyrx
