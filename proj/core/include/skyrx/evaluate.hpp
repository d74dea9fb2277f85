#pragma once

// Detection quality (ROC/AUC), reception statistics and the latency
// accounting of the staged air pipeline.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "skyrx/cube.hpp"

namespace skyrx {

struct ReceivedCube;

struct RocPoint {
    double threshold = 0.0;
    double fpr = 0.0;
    double tpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // from (0,0) to (1,1)
    double auc = 0.0;
};

// Lost pixels count as score 0. One vertex per distinct score, AUC by
// trapezoid. Throws InvalidInput on shape mismatch or a single-class mask.
RocCurve roc_curve(std::span<const float> scores, const GroundTruthMask& mask,
                   std::span<const std::uint8_t> lost = {});
RocCurve roc_curve(const ScoreMap& scores, const GroundTruthMask& mask);
RocCurve roc_curve(const ReceivedCube& cube, const GroundTruthMask& mask);

// (auc_a - auc_b) / auc_b
double auc_delta(const RocCurve& a, const RocCurve& b);

struct ReceptionStats {
    double mean_pct = 0.0;
    double std_pct = 0.0;   // population standard deviation
    double complete_fraction = 0.0;
};

ReceptionStats reception_stats(std::span<const double> completions);
ReceptionStats reception_stats(std::span<const ReceivedCube> cubes);

struct StageTiming {
    std::uint32_t cube_id = 0;
    double save_s = 0.0;
    double calibrate_s = 0.0;
    double detect_s = 0.0;
    double transmit_s = 0.0;
};

inline constexpr double kAcquisitionSeconds = kDefaultLines / kLineRateHz;

struct StageSummary {
    std::string stage;
    double mean_s = 0.0;
    double std_s = 0.0;  // sample standard deviation; 0 for a single cube
};

struct LatencyReport {
    std::vector<StageSummary> stages;  // save, calibrate, detect, transmit
    double acquisition_s = kAcquisitionSeconds;
    double latency_s = 0.0;
    bool real_time = false;
};

// latency = acquisition + sum of stage means; real time when every
// mean + k * std is below the acquisition time. Throws on an empty series.
LatencyReport latency_report(std::span<const StageTiming> timings, double acquisition_s = kAcquisitionSeconds,
                             double k = 0.0);

void write_roc_csv(std::ostream& out, const RocCurve& curve);
void write_timings_csv(std::ostream& out, std::span<const StageTiming> timings);
void write_latency_csv(std::ostream& out, const LatencyReport& report);
std::string summary_text(const LatencyReport& report);

}  // namespace skyrx
