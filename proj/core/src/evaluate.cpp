#include "skyrx/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "skyrx/assemble.hpp"

namespace skyrx {

RocCurve roc_curve(std::span<const float> scores, const GroundTruthMask& mask, std::span<const std::uint8_t> lost) {
    const std::size_t n = mask.values.size();
    if (scores.size() != n) {
        throw InvalidInput("roc: " + std::to_string(scores.size()) + " scores for a mask of " + std::to_string(n));
    }
    if (!lost.empty() && lost.size() != n) throw InvalidInput("roc: lost flags do not match the mask");

    std::vector<std::pair<float, std::uint8_t>> v(n);
    std::size_t pos = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const float s = (!lost.empty() && lost[i]) ? 0.0f : scores[i];
        if (std::isnan(s)) throw InvalidInput("roc: NaN score at pixel " + std::to_string(i));
        v[i] = {s, mask.values[i] ? std::uint8_t{1} : std::uint8_t{0}};
        pos += v[i].second;
    }
    const std::size_t neg = n - pos;
    if (pos == 0 || neg == 0) throw InvalidInput("roc: undefined for a single-class mask");

    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

    RocCurve c;
    c.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    std::size_t tp = 0, fp = 0;
    double area = 0.0;
    for (std::size_t i = 0; i < n;) {
        const float t = v[i].first;
        for (; i < n && v[i].first == t; ++i) (v[i].second ? tp : fp) += 1;
        const RocPoint p{t, static_cast<double>(fp) / neg, static_cast<double>(tp) / pos};
        const RocPoint& q = c.points.back();
        area += (p.fpr - q.fpr) * (p.tpr + q.tpr) * 0.5;
        c.points.push_back(p);
    }
    c.auc = area;
    return c;
}

RocCurve roc_curve(const ScoreMap& scores, const GroundTruthMask& mask) {
    if (scores.lines != mask.lines || scores.samples != mask.samples) throw InvalidInput("roc: shape mismatch");
    return roc_curve(scores.values, mask);
}

RocCurve roc_curve(const ReceivedCube& cube, const GroundTruthMask& mask) {
    if (cube.lines != mask.lines || cube.samples != mask.samples) throw InvalidInput("roc: shape mismatch");
    return roc_curve(cube.scores, mask, cube.lost_pixels());
}

double auc_delta(const RocCurve& a, const RocCurve& b) { return (a.auc - b.auc) / b.auc; }

ReceptionStats reception_stats(std::span<const double> completions) {
    if (completions.empty()) throw InvalidInput("reception_stats: no cubes");
    const double n = static_cast<double>(completions.size());
    const double mean = std::accumulate(completions.begin(), completions.end(), 0.0) / n;
    double ss = 0.0;
    std::size_t full = 0;
    for (double c : completions) {
        ss += (c - mean) * (c - mean);
        if (c >= 1.0) ++full;
    }
    return {100.0 * mean, 100.0 * std::sqrt(ss / n), static_cast<double>(full) / n};
}

ReceptionStats reception_stats(std::span<const ReceivedCube> cubes) {
    std::vector<double> c;
    for (const ReceivedCube& r : cubes) c.push_back(r.completion());
    return reception_stats(c);
}

LatencyReport latency_report(std::span<const StageTiming> timings, double acquisition_s, double k) {
    if (timings.empty()) throw InvalidInput("latency_report: no timings");
    LatencyReport rep;
    rep.acquisition_s = acquisition_s;
    const char* names[] = {"save", "calibrate", "detect", "transmit"};
    double StageTiming::*fields[] = {&StageTiming::save_s, &StageTiming::calibrate_s, &StageTiming::detect_s,
                                      &StageTiming::transmit_s};
    const double n = static_cast<double>(timings.size());
    rep.latency_s = acquisition_s;
    rep.real_time = true;
    for (int s = 0; s < 4; ++s) {
        double sum = 0.0;
        for (const StageTiming& t : timings) sum += t.*fields[s];
        const double mean = sum / n;
        double ss = 0.0;
        for (const StageTiming& t : timings) ss += (t.*fields[s] - mean) * (t.*fields[s] - mean);
        const double sd = timings.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        rep.stages.push_back({names[s], mean, sd});
        rep.latency_s += mean;
        if (!(mean + k * sd < acquisition_s)) rep.real_time = false;
    }
    return rep;
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
    out << "threshold,fpr,tpr\n";
    for (const RocPoint& p : curve.points) out << p.threshold << ',' << p.fpr << ',' << p.tpr << '\n';
}

void write_timings_csv(std::ostream& out, std::span<const StageTiming> timings) {
    out << "cube_id,save_s,calibrate_s,detect_s,transmit_s\n";
    for (const StageTiming& t : timings) {
        out << t.cube_id << ',' << t.save_s << ',' << t.calibrate_s << ',' << t.detect_s << ',' << t.transmit_s
            << '\n';
    }
}

void write_latency_csv(std::ostream& out, const LatencyReport& report) {
    out << "stage,mean_s,std_s\n";
    for (const StageSummary& s : report.stages) out << s.stage << ',' << s.mean_s << ',' << s.std_s << '\n';
}

std::string summary_text(const LatencyReport& r) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(3);
    for (const StageSummary& s : r.stages) os << s.stage << ": " << s.mean_s << " +/- " << s.std_s << " s\n";
    os << "acquisition: " << r.acquisition_s << " s\n";
    os << "latency: " << r.latency_s << " s\n";
    os << "real_time: " << (r.real_time ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace skyrx
