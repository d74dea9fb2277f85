#include "skyrx/rx.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace skyrx {

namespace {

constexpr std::size_t kBlockPixels = 4096;
constexpr std::array<double, 5> kRidgeSteps = {1e-10, 1e-9, 1e-8, 1e-7, 1e-6};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FloatRows = Eigen::Map<const Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// Accepts a factorization only when every pivot is meaningfully positive;
// exactly singular inputs otherwise slip through with rounding-noise pivots.
bool factor_ok(const Eigen::LLT<Eigen::MatrixXd>& llt, const Eigen::MatrixXd& m) {
    if (llt.info() != Eigen::Success) return false;
    const Eigen::MatrixXd l = llt.matrixL();
    const double min_pivot = l.diagonal().minCoeff();
    const double scale = m.diagonal().maxCoeff();
    return min_pivot > 0.0 && min_pivot * min_pivot > 1e-14 * scale;
}

}  // namespace

CubeStats compute_stats(std::span<const float> pixels, std::size_t bands) {
    if (bands == 0 || pixels.size() % bands != 0) {
        throw InvalidInput("compute_stats: pixel buffer is not a whole number of spectra");
    }
    const std::size_t n = pixels.size() / bands;
    if (n <= bands) {
        throw InvalidInput("compute_stats: insufficient samples, " + std::to_string(n) + " pixels for " +
                           std::to_string(bands) + " bands");
    }
    const Eigen::Index b = static_cast<Eigen::Index>(bands);

    CubeStats st;
    st.pixels = n;
    st.mu = Eigen::VectorXd::Zero(b);
    for (std::size_t p = 0; p < n; ++p) {
        const float* px = pixels.data() + p * bands;
        for (std::size_t k = 0; k < bands; ++k) {
            if (!std::isfinite(px[k])) {
                throw NumericalError("compute_stats: invalid data, non-finite value at pixel " + std::to_string(p));
            }
            st.mu[static_cast<Eigen::Index>(k)] += px[k];
        }
    }
    st.mu /= static_cast<double>(n);

    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(b, b);
    for (std::size_t start = 0; start < n; start += kBlockPixels) {
        const std::size_t count = std::min(kBlockPixels, n - start);
        FloatRows block(pixels.data() + start * bands, static_cast<Eigen::Index>(count), b);
        RowMatrix centered = block.cast<double>().rowwise() - st.mu.transpose();
        acc.selfadjointView<Eigen::Lower>().rankUpdate(centered.transpose());
    }
    st.sigma = acc.selfadjointView<Eigen::Lower>();
    st.sigma /= static_cast<double>(n - 1);

    Eigen::LLT<Eigen::MatrixXd> llt(st.sigma);
    if (!factor_ok(llt, st.sigma)) {
        const double trace = st.sigma.trace();
        const double scale = trace > 0.0 ? trace / static_cast<double>(bands) : 1.0;
        bool done = false;
        for (double eps : kRidgeSteps) {
            const double ridge = eps * scale;
            Eigen::MatrixXd reg = st.sigma;
            reg.diagonal().array() += ridge;
            llt.compute(reg);
            if (factor_ok(llt, reg)) {
                st.ridge_used = ridge;
                done = true;
                break;
            }
        }
        if (!done) throw NumericalError("compute_stats: covariance not factorable even with ridge");
    }
    st.chol_lower = llt.matrixL();
    st.sigma_inv = llt.solve(Eigen::MatrixXd::Identity(b, b));
    return st;
}

CubeStats compute_stats(const RadianceCube& cube) { return compute_stats(cube.values(), cube.bands()); }

std::vector<float> rx_scores(std::span<const float> pixels, std::size_t bands, const CubeStats& stats) {
    if (bands != stats.bands() || pixels.size() % bands != 0) {
        throw InvalidInput("rx_scores: cube has " + std::to_string(bands) + " bands, stats have " +
                           std::to_string(stats.bands()));
    }
    const std::size_t n = pixels.size() / bands;
    const Eigen::Index b = static_cast<Eigen::Index>(bands);
    std::vector<float> out(n);
    const auto lower = stats.chol_lower.triangularView<Eigen::Lower>();
    for (std::size_t start = 0; start < n; start += kBlockPixels) {
        const std::size_t count = std::min(kBlockPixels, n - start);
        FloatRows block(pixels.data() + start * bands, static_cast<Eigen::Index>(count), b);
        // Whitened residuals: L y = (s - mu), delta = |y|^2.
        Eigen::MatrixXd resid = (block.cast<double>().rowwise() - stats.mu.transpose()).transpose();
        lower.solveInPlace(resid);
        const Eigen::VectorXd d = resid.colwise().squaredNorm();
        for (std::size_t i = 0; i < count; ++i) out[start + i] = static_cast<float>(d[static_cast<Eigen::Index>(i)]);
    }
    return out;
}

ScoreMap rx_scores(const RadianceCube& cube, const CubeStats& stats) {
    ScoreMap map;
    map.lines = cube.lines();
    map.samples = cube.samples();
    map.values = rx_scores(cube.values(), cube.bands(), stats);
    map.max_score = map.values.empty() ? 0.0f : *std::max_element(map.values.begin(), map.values.end());
    return map;
}

ScoreMap normalize_scores(const ScoreMap& map) {
    ScoreMap out = map;
    if (map.max_score > 0.0f) {
        for (float& v : out.values) v /= map.max_score;
        out.max_score = 1.0f;
    } else {
        std::fill(out.values.begin(), out.values.end(), 0.0f);
        out.max_score = 0.0f;
    }
    return out;
}

ScoreMap sqrt_normalize_scores(const ScoreMap& map) {
    ScoreMap out = normalize_scores(map);
    for (float& v : out.values) v = std::sqrt(v);
    return out;
}

GroundTruthMask threshold_scores(const ScoreMap& normalized, double t) {
    if (!(t >= 0.0 && t <= 1.0)) {
        throw InvalidInput("threshold_scores: invalid threshold " + std::to_string(t) + ", must lie in [0, 1]");
    }
    GroundTruthMask mask(normalized.lines, normalized.samples);
    for (std::size_t i = 0; i < normalized.values.size(); ++i) {
        mask.values[i] = normalized.values[i] > t ? 1 : 0;
    }
    return mask;
}

}  // namespace skyrx
