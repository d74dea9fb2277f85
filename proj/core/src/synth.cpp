#include "skyrx/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace skyrx {

namespace {

// Portable standard normals: Box-Muller over mt19937_64 (the std
// distributions are implementation-defined and would break determinism).
class NormalSource {
public:
    explicit NormalSource(std::uint64_t seed) : rng_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidInput("invalid spec: " + what);
}

}  // namespace

double SpectrumTemplate::at(double nm) const {
    if (knots.empty()) return 0.0;
    if (nm <= knots.front().first) return knots.front().second;
    if (nm >= knots.back().first) return knots.back().second;
    auto hi = std::upper_bound(knots.begin(), knots.end(), nm,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    auto lo = hi - 1;
    const double f = (nm - lo->first) / (hi->first - lo->first);
    return lo->second + (hi->second - lo->second) * f;
}

bool Anomaly::contains(double east, double north) const noexcept {
    const double de = (east - center_east) / (0.5 * size_east);
    const double dn = (north - center_north) / (0.5 * size_north);
    if (shape == AnomalyShape::Rectangle) return std::abs(de) <= 1.0 && std::abs(dn) <= 1.0;
    return de * de + dn * dn <= 1.0;
}

std::vector<float> synthetic_wavelengths(std::uint32_t in_range) {
    if (in_range < 2) throw InvalidInput("synthetic_wavelengths: need at least 2 in-range bands");
    const double step = 600.0 / (in_range - 1);
    std::vector<float> wl;
    wl.reserve(in_range + 2 * kOutOfRangeBandsEachSide);
    for (std::uint32_t k = kOutOfRangeBandsEachSide; k > 0; --k) wl.push_back(static_cast<float>(400.0 - step * k));
    for (std::uint32_t k = 0; k < in_range; ++k) {
        wl.push_back(k + 1 == in_range ? 1000.0f : static_cast<float>(400.0 + step * k));
    }
    for (std::uint32_t k = 1; k <= kOutOfRangeBandsEachSide; ++k) wl.push_back(static_cast<float>(1000.0 + step * k));
    return wl;
}

CalibrationTables synthetic_tables(std::uint32_t samples, std::uint32_t bands) {
    CalibrationTables t;
    t.samples = samples;
    t.bands = bands;
    const std::size_t n = static_cast<std::size_t>(samples) * bands;
    t.dark.resize(n);
    t.coeff.resize(n);
    for (std::uint32_t s = 0; s < samples; ++s) {
        for (std::uint32_t b = 0; b < bands; ++b) {
            const std::size_t i = static_cast<std::size_t>(s) * bands + b;
            t.dark[i] = static_cast<float>(60 + (s * 7 + b * 13) % 40);
            // Vignetting across the slit and a mild per-band response ripple.
            const double x = (static_cast<double>(s) / std::max<std::uint32_t>(1, samples - 1)) - 0.5;
            t.coeff[i] = static_cast<float>(0.012 * (1.0 + 0.08 * x * x) * (1.0 + 0.03 * std::sin(0.37 * b)));
        }
    }
    return t;
}

FlightSynthesizer::FlightSynthesizer(SceneSpec scene, FlightSpec flight, std::uint64_t seed)
    : scene_(std::move(scene)), flight_(std::move(flight)), seed_(seed) {
    require(flight_.altitude_m > 0.0, "altitude must be > 0");
    require(flight_.speed_mps > 0.0, "speed must be > 0");
    require(flight_.line_rate_hz > 0.0, "line rate must be > 0");
    require(flight_.ins_rate_hz > 0.0, "INS rate must be > 0");
    require(flight_.cubes >= 1, "need at least one cube");
    require(flight_.lines_per_cube >= 1, "need at least one line per cube");
    require(flight_.samples >= 2, "need at least two samples");
    require(flight_.fov_deg > 0.0 && flight_.fov_deg < 180.0, "fov must lie in (0, 180)");
    require(flight_.gain_min > 0.0 && flight_.gain_max >= flight_.gain_min, "gain range must satisfy 0 < min <= max");
    require(scene_.width_m > 0.0 && scene_.length_m > 0.0, "scene extent must be positive");
    require(scene_.noise_sigma >= 0.0, "noise sigma must be >= 0");
    require(scene_.texture_sigma >= 0.0, "texture sigma must be >= 0");
    require(scene_.illumination > 0.0, "illumination must be > 0");
    require(!scene_.background.knots.empty(), "background spectrum needs at least one knot");
    for (std::size_t i = 0; i < scene_.anomalies.size(); ++i) {
        const Anomaly& a = scene_.anomalies[i];
        const std::string name = "anomaly " + std::to_string(i);
        require(a.size_east > 0.0 && a.size_north > 0.0, name + " has non-positive size");
        require(!a.spectrum.knots.empty(), name + " has an empty spectrum");
        require(a.center_east - 0.5 * a.size_east >= 0.0 && a.center_east + 0.5 * a.size_east <= scene_.width_m &&
                    a.center_north - 0.5 * a.size_north >= 0.0 &&
                    a.center_north + 0.5 * a.size_north <= scene_.length_m,
                name + " lies outside the scene extent");
    }

    wavelengths_ = synthetic_wavelengths(flight_.bands_in_range);
    tables_ = synthetic_tables(flight_.samples, static_cast<std::uint32_t>(wavelengths_.size()));

    const std::uint64_t total_lines = static_cast<std::uint64_t>(flight_.cubes) * flight_.lines_per_cube;
    const std::uint64_t ins_step = static_cast<std::uint64_t>(std::llround(1e6 / flight_.ins_rate_hz));
    const std::uint64_t first = flight_.start_time_us - ins_step;
    const std::uint64_t last = exposure_time_us(total_lines - 1) + ins_step;
    for (std::uint64_t i = 0;; ++i) {
        const std::uint64_t ts = first + static_cast<std::uint64_t>(std::llround(i * 1e6 / flight_.ins_rate_hz));
        track_.push_back(ins_at(ts));
        if (ts >= last) break;
    }
}

std::uint64_t FlightSynthesizer::exposure_time_us(std::uint64_t global_line) const noexcept {
    return flight_.start_time_us +
           static_cast<std::uint64_t>(std::llround(static_cast<double>(global_line) * 1e6 / flight_.line_rate_hz));
}

double FlightSynthesizer::gain_at(std::uint64_t t_us) const noexcept {
    const double tau = (static_cast<double>(t_us) - static_cast<double>(flight_.start_time_us)) * 1e-6;
    const double mid = 0.5 * (flight_.gain_min + flight_.gain_max);
    const double amp = 0.5 * (flight_.gain_max - flight_.gain_min);
    return mid + amp * std::sin(2.0 * std::numbers::pi * tau / flight_.gain_period_s);
}

Pose FlightSynthesizer::true_pose(std::uint64_t t_us) const noexcept {
    const double tau = (static_cast<double>(t_us) - static_cast<double>(flight_.start_time_us)) * 1e-6;
    const double h = flight_.heading_deg * std::numbers::pi / 180.0;
    const double two_pi = 2.0 * std::numbers::pi;
    Pose p;
    p.east = flight_.start_east + flight_.speed_mps * tau * std::sin(h);
    p.north = flight_.start_north + flight_.speed_mps * tau * std::cos(h);
    p.alt = flight_.altitude_m;
    p.roll = flight_.roll_amp_deg * std::sin(two_pi * tau / flight_.roll_period_s);
    p.pitch = flight_.pitch_amp_deg * std::sin(two_pi * tau / flight_.pitch_period_s + 1.0);
    p.yaw = wrap_degrees(flight_.heading_deg + flight_.yaw_amp_deg * std::sin(two_pi * tau / flight_.yaw_period_s + 2.0));
    p.time_us = t_us;
    return p;
}

InsSample FlightSynthesizer::ins_at(std::uint64_t t_us) const {
    const Pose p = true_pose(t_us);
    InsSample s;
    s.timestamp_us = t_us;
    to_geodetic(flight_.origin, p.east, p.north, s.lat, s.lon);
    s.alt = static_cast<float>(p.alt);
    s.roll = static_cast<float>(wrap_degrees(p.roll));
    s.pitch = static_cast<float>(wrap_degrees(p.pitch));
    s.yaw = static_cast<float>(wrap_degrees(p.yaw));
    // float rounding can land exactly on +180
    if (s.yaw >= 180.0f) s.yaw = -180.0f;
    return s;
}

SynthCube FlightSynthesizer::cube(std::uint32_t id) const {
    if (id >= flight_.cubes) throw BoundsError("cube id " + std::to_string(id) + " beyond flight");
    const std::uint32_t lines = flight_.lines_per_cube;
    const std::uint32_t samples = flight_.samples;
    const auto bands = static_cast<std::uint32_t>(wavelengths_.size());

    SynthCube out{RawCube(lines, samples, bands), GroundTruthMask(lines, samples)};
    RawCube& cube = out.cube;
    cube.cube_id = id;
    cube.wavelengths() = wavelengths_;

    // Template radiance at every band center, background first.
    std::vector<std::vector<double>> spectra;
    spectra.reserve(scene_.anomalies.size() + 1);
    const auto sample_template = [&](const SpectrumTemplate& t) {
        std::vector<double> v(bands);
        for (std::uint32_t b = 0; b < bands; ++b) v[b] = t.at(wavelengths_[b]) * scene_.illumination;
        return v;
    };
    spectra.push_back(sample_template(scene_.background));
    for (const auto& a : scene_.anomalies) spectra.push_back(sample_template(a.spectrum));

    NormalSource noise(seed_ ^ id);
    const CameraModel cam = camera();
    const bool noisy = scene_.noise_sigma > 0.0;
    const bool textured = scene_.texture_sigma > 0.0;

    for (std::uint32_t l = 0; l < lines; ++l) {
        const std::uint64_t global = static_cast<std::uint64_t>(id) * lines + l;
        const std::uint64_t t = exposure_time_us(global);
        const double gain = gain_at(t);

        LineMeta& meta = cube.line_meta()[l];
        meta.exposure_start_us = t;
        meta.gain = gain;
        auto after = std::lower_bound(track_.begin(), track_.end(), t,
                                      [](const InsSample& s, std::uint64_t v) { return s.timestamp_us < v; });
        meta.ins_after = *after;
        meta.ins_before = after->timestamp_us == t ? *after : *(after - 1);

        const std::vector<GroundPoint> ground = project_line(true_pose(t), cam);
        for (std::uint32_t s = 0; s < samples; ++s) {
            std::size_t which = 0;
            if (ground[s].valid) {
                for (std::size_t a = 0; a < scene_.anomalies.size(); ++a) {
                    if (scene_.anomalies[a].contains(ground[s].east, ground[s].north)) {
                        which = a + 1;
                        break;
                    }
                }
            }
            out.mask.set(l, s, which != 0);
            const std::vector<double>& spectrum = spectra[which];
            const double texture = textured ? std::exp(scene_.texture_sigma * noise.next()) : 1.0;

            std::uint16_t* px = cube.pixel(l, s).data();
            const std::size_t row = static_cast<std::size_t>(s) * bands;
            for (std::uint32_t b = 0; b < bands; ++b) {
                double radiance = spectrum[b] * texture;
                if (noisy) radiance *= std::exp(scene_.noise_sigma * noise.next());
                const double base = std::nearbyint(radiance / tables_.coeff[row + b]);
                const double dn = std::nearbyint(base * gain + tables_.dark[row + b]);
                px[b] = static_cast<std::uint16_t>(std::clamp(dn, 0.0, 65535.0));
            }
        }
    }
    return out;
}

FlightData generate_flight(const SceneSpec& scene, const FlightSpec& flight, std::uint64_t seed) {
    FlightSynthesizer synth(scene, flight, seed);
    FlightData data;
    data.track = synth.track();
    data.tables = synth.tables();
    for (std::uint32_t c = 0; c < synth.cube_count(); ++c) {
        SynthCube sc = synth.cube(c);
        data.cubes.push_back(std::move(sc.cube));
        data.masks.push_back(std::move(sc.mask));
    }
    return data;
}

FlightSpec default_flight(std::uint32_t cubes) {
    FlightSpec f;
    f.cubes = cubes;
    f.roll_amp_deg = 0.5;
    f.pitch_amp_deg = 0.5;
    f.yaw_amp_deg = 1.0;
    return f;
}

SceneSpec default_scene(const FlightSpec& flight) {
    SceneSpec s;
    const double cube_length = flight.speed_mps * flight.lines_per_cube / flight.line_rate_hz;
    s.width_m = 2.0 * flight.start_east;
    s.length_m = flight.start_north + cube_length * flight.cubes + 10.0;
    // Vegetation-like background: green bump, red-edge rise, NIR plateau.
    s.background.knots = {{380, 14}, {450, 16}, {550, 26}, {650, 15}, {700, 22}, {750, 55}, {900, 60}, {1020, 48}};
    const SpectrumTemplate tarp{{{380, 40}, {460, 62}, {520, 30}, {600, 12}, {750, 10}, {1020, 8}}};
    const SpectrumTemplate metal{{{380, 45}, {1020, 40}}};
    const SpectrumTemplate paint{{{380, 10}, {560, 12}, {600, 58}, {700, 60}, {800, 30}, {1020, 25}}};
    // Three targets per cube-length of track, about 0.5% of the imaged pixels
    // at the default 1000-line cube. Short cubes get proportionally shorter targets.
    const double f = cube_length / 20.0;
    const double k = std::min(1.0, f);
    for (std::uint32_t c = 0; c < flight.cubes; ++c) {
        const double n0 = flight.start_north + cube_length * c;
        const double e0 = flight.start_east;
        s.anomalies.push_back({AnomalyShape::Rectangle, e0 - 6.0, n0 + 5.0 * f, 1.0, 2.0 * k, metal});
        s.anomalies.push_back({AnomalyShape::Ellipse, e0 + 2.5, n0 + 11.0 * f, 1.2, 1.0 * k, paint});
        s.anomalies.push_back({AnomalyShape::Rectangle, e0 + 9.0, n0 + 15.5 * f, 0.8, 0.8 * k, tarp});
    }
    return s;
}

}  // namespace skyrx
