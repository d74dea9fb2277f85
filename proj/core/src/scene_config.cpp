#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "skyrx/synth.hpp"

namespace skyrx {

namespace {

using nlohmann::json;

json spectrum_json(const SpectrumTemplate& t) {
    json knots = json::array();
    for (const auto& [nm, v] : t.knots) knots.push_back({nm, v});
    return knots;
}

SpectrumTemplate spectrum_from(const json& j) {
    SpectrumTemplate t;
    for (const auto& k : j) t.knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
    std::sort(t.knots.begin(), t.knots.end());
    return t;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <typename T>
void maybe(const json& j, const char* key, T& field) {
    if (j.contains(key)) field = j.at(key).get<T>();
}

}  // namespace

std::string scene_to_json(const SceneSpec& scene) {
    json j;
    j["width_m"] = scene.width_m;
    j["length_m"] = scene.length_m;
    j["background"] = spectrum_json(scene.background);
    j["noise_sigma"] = scene.noise_sigma;
    j["texture_sigma"] = scene.texture_sigma;
    j["illumination"] = scene.illumination;
    j["anomalies"] = json::array();
    for (const auto& a : scene.anomalies) {
        j["anomalies"].push_back({{"shape", a.shape == AnomalyShape::Rectangle ? "rectangle" : "ellipse"},
                                  {"center", {a.center_east, a.center_north}},
                                  {"size", {a.size_east, a.size_north}},
                                  {"spectrum", spectrum_json(a.spectrum)}});
    }
    return j.dump(2);
}

SceneSpec scene_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        SceneSpec s;
        maybe(j, "width_m", s.width_m);
        maybe(j, "length_m", s.length_m);
        maybe(j, "noise_sigma", s.noise_sigma);
        maybe(j, "texture_sigma", s.texture_sigma);
        maybe(j, "illumination", s.illumination);
        if (j.contains("background")) s.background = spectrum_from(j.at("background"));
        for (const auto& a : j.value("anomalies", json::array())) {
            Anomaly an;
            const std::string shape = a.value("shape", "rectangle");
            if (shape == "rectangle") {
                an.shape = AnomalyShape::Rectangle;
            } else if (shape == "ellipse") {
                an.shape = AnomalyShape::Ellipse;
            } else {
                throw InvalidInput("scene: unknown anomaly shape \"" + shape + "\"");
            }
            an.center_east = a.at("center").at(0).get<double>();
            an.center_north = a.at("center").at(1).get<double>();
            an.size_east = a.at("size").at(0).get<double>();
            an.size_north = a.at("size").at(1).get<double>();
            an.spectrum = spectrum_from(a.at("spectrum"));
            s.anomalies.push_back(std::move(an));
        }
        return s;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("scene: ") + e.what());
    }
}

std::string flight_to_json(const FlightSpec& f) {
    json j;
    j["altitude_m"] = f.altitude_m;
    j["speed_mps"] = f.speed_mps;
    j["heading_deg"] = f.heading_deg;
    j["start"] = {f.start_east, f.start_north};
    j["line_rate_hz"] = f.line_rate_hz;
    j["ins_rate_hz"] = f.ins_rate_hz;
    j["roll"] = {{"amplitude_deg", f.roll_amp_deg}, {"period_s", f.roll_period_s}};
    j["pitch"] = {{"amplitude_deg", f.pitch_amp_deg}, {"period_s", f.pitch_period_s}};
    j["yaw"] = {{"amplitude_deg", f.yaw_amp_deg}, {"period_s", f.yaw_period_s}};
    j["gain"] = {{"min", f.gain_min}, {"max", f.gain_max}, {"period_s", f.gain_period_s}};
    j["cubes"] = f.cubes;
    j["lines_per_cube"] = f.lines_per_cube;
    j["samples"] = f.samples;
    j["bands_in_range"] = f.bands_in_range;
    j["fov_deg"] = f.fov_deg;
    j["start_time_us"] = f.start_time_us;
    j["origin"] = {f.origin.lat, f.origin.lon};
    return j.dump(2);
}

FlightSpec flight_from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        FlightSpec f;
        maybe(j, "altitude_m", f.altitude_m);
        maybe(j, "speed_mps", f.speed_mps);
        maybe(j, "heading_deg", f.heading_deg);
        if (j.contains("start")) {
            f.start_east = j.at("start").at(0).get<double>();
            f.start_north = j.at("start").at(1).get<double>();
        }
        maybe(j, "line_rate_hz", f.line_rate_hz);
        maybe(j, "ins_rate_hz", f.ins_rate_hz);
        const auto axis = [&](const char* key, double& amp, double& period) {
            if (!j.contains(key)) return;
            maybe(j.at(key), "amplitude_deg", amp);
            maybe(j.at(key), "period_s", period);
        };
        axis("roll", f.roll_amp_deg, f.roll_period_s);
        axis("pitch", f.pitch_amp_deg, f.pitch_period_s);
        axis("yaw", f.yaw_amp_deg, f.yaw_period_s);
        if (j.contains("gain")) {
            maybe(j.at("gain"), "min", f.gain_min);
            maybe(j.at("gain"), "max", f.gain_max);
            maybe(j.at("gain"), "period_s", f.gain_period_s);
        }
        maybe(j, "cubes", f.cubes);
        maybe(j, "lines_per_cube", f.lines_per_cube);
        maybe(j, "samples", f.samples);
        maybe(j, "bands_in_range", f.bands_in_range);
        maybe(j, "fov_deg", f.fov_deg);
        maybe(j, "start_time_us", f.start_time_us);
        if (j.contains("origin")) {
            f.origin.lat = j.at("origin").at(0).get<double>();
            f.origin.lon = j.at("origin").at(1).get<double>();
        }
        return f;
    } catch (const json::exception& e) {
        throw InvalidInput(std::string("flight: ") + e.what());
    }
}

SceneSpec load_scene(const std::string& path) { return scene_from_json(slurp(path)); }
FlightSpec load_flight(const std::string& path) { return flight_from_json(slurp(path)); }

}  // namespace skyrx
