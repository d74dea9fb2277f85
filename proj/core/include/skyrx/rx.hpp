#pragma once

// Global RX anomaly detector: one Gaussian fit per cube, each pixel scored by
// its squared Mahalanobis distance from that fit.

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "skyrx/cube.hpp"

namespace skyrx {

struct CubeStats {
    Eigen::VectorXd mu;
    Eigen::MatrixXd sigma;       // unbiased sample covariance, 1/(N-1)
    Eigen::MatrixXd sigma_inv;   // inverse of sigma + ridge_used * I
    Eigen::MatrixXd chol_lower;  // lower Cholesky factor of sigma + ridge_used * I
    double ridge_used = 0.0;
    std::size_t pixels = 0;

    std::size_t bands() const noexcept { return static_cast<std::size_t>(mu.size()); }
};

// `pixels` holds N spectra of `bands` values each, contiguous per pixel.
// Throws InvalidInput when N <= bands, NumericalError on non-finite input.
CubeStats compute_stats(std::span<const float> pixels, std::size_t bands);
CubeStats compute_stats(const RadianceCube& cube);

std::vector<float> rx_scores(std::span<const float> pixels, std::size_t bands, const CubeStats& stats);
ScoreMap rx_scores(const RadianceCube& cube, const CubeStats& stats);

// Divides by the cube maximum; an all-zero map stays all-zero.
ScoreMap normalize_scores(const ScoreMap& map);

// Display domain used on the link and at the ground station: sqrt(delta / max).
ScoreMap sqrt_normalize_scores(const ScoreMap& map);

// mask = value > t on an already normalized map. t must lie in [0, 1].
GroundTruthMask threshold_scores(const ScoreMap& normalized, double t);

inline constexpr double kDefaultThreshold = 0.110;

}  // namespace skyrx
