#include "skyrx/fec.hpp"

#include <algorithm>

#include "skyrx/gf256.hpp"

namespace skyrx {

ReedSolomon::ReedSolomon(std::uint32_t data, std::uint32_t parity) : k_(data), m_(parity) {
    if (k_ == 0 || m_ == 0 || k_ + m_ > 256) {
        throw InvalidInput("ReedSolomon: need 0 < k, 0 < m, k + m <= 256");
    }
    // x_i = k + i, y_j = j are distinct field elements, so x_i ^ y_j != 0.
    cauchy_.resize(static_cast<std::size_t>(m_) * k_);
    for (std::uint32_t i = 0; i < m_; ++i) {
        for (std::uint32_t j = 0; j < k_; ++j) {
            cauchy_[i * k_ + j] = gf256::inv(static_cast<std::uint8_t>((k_ + i) ^ j));
        }
    }
}

std::vector<std::vector<std::uint8_t>> ReedSolomon::encode(std::span<const std::vector<std::uint8_t>> data) const {
    if (data.size() != k_) {
        throw InvalidInput("fec: group needs exactly " + std::to_string(k_) + " data payloads, got " +
                           std::to_string(data.size()));
    }
    const std::size_t len = data[0].size();
    for (const auto& d : data) {
        if (d.size() != len) throw InvalidInput("fec: invalid group, data payloads differ in length");
    }
    std::vector<std::vector<std::uint8_t>> parity(m_, std::vector<std::uint8_t>(len, 0));
    for (std::uint32_t i = 0; i < m_; ++i) {
        for (std::uint32_t j = 0; j < k_; ++j) gf256::mul_add(parity[i], data[j], coefficient(i, j));
    }
    return parity;
}

bool ReedSolomon::reconstruct(std::vector<std::optional<std::vector<std::uint8_t>>>& shards) const {
    if (shards.size() != k_ + m_) throw InvalidInput("fec: shard vector must have k + m slots");
    std::vector<std::uint32_t> lost;
    std::vector<std::uint32_t> parity_rows;
    std::size_t present = 0;
    std::size_t len = 0;
    for (std::uint32_t i = 0; i < k_ + m_; ++i) {
        if (!shards[i]) {
            if (i < k_) lost.push_back(i);
            continue;
        }
        ++present;
        if (len == 0) len = shards[i]->size();
        if (shards[i]->size() != len) throw InvalidInput("fec: invalid group, payloads differ in length");
        if (i >= k_) parity_rows.push_back(i - k_);
    }
    if (lost.empty()) return true;
    if (present < k_) return false;

    const std::size_t e = lost.size();
    parity_rows.resize(e);

    // Syndromes: parity minus the contribution of surviving data.
    std::vector<std::vector<std::uint8_t>> syn(e);
    for (std::size_t r = 0; r < e; ++r) {
        syn[r] = *shards[k_ + parity_rows[r]];
        for (std::uint32_t j = 0; j < k_; ++j) {
            if (shards[j]) gf256::mul_add(syn[r], *shards[j], coefficient(parity_rows[r], j));
        }
    }

    // Invert the e x e Cauchy sub-matrix by Gauss-Jordan.
    std::vector<std::uint8_t> a(e * e), inv(e * e, 0);
    for (std::size_t r = 0; r < e; ++r) {
        for (std::size_t c = 0; c < e; ++c) a[r * e + c] = coefficient(parity_rows[r], lost[c]);
        inv[r * e + r] = 1;
    }
    for (std::size_t col = 0; col < e; ++col) {
        std::size_t pivot = col;
        while (pivot < e && a[pivot * e + col] == 0) ++pivot;
        if (pivot == e) throw NumericalError("fec: singular decode matrix");
        if (pivot != col) {
            for (std::size_t c = 0; c < e; ++c) {
                std::swap(a[pivot * e + c], a[col * e + c]);
                std::swap(inv[pivot * e + c], inv[col * e + c]);
            }
        }
        const std::uint8_t scale = gf256::inv(a[col * e + col]);
        for (std::size_t c = 0; c < e; ++c) {
            a[col * e + c] = gf256::mul(a[col * e + c], scale);
            inv[col * e + c] = gf256::mul(inv[col * e + c], scale);
        }
        for (std::size_t r = 0; r < e; ++r) {
            const std::uint8_t f = a[r * e + col];
            if (r == col || f == 0) continue;
            for (std::size_t c = 0; c < e; ++c) {
                a[r * e + c] ^= gf256::mul(f, a[col * e + c]);
                inv[r * e + c] ^= gf256::mul(f, inv[col * e + c]);
            }
        }
    }

    for (std::size_t c = 0; c < e; ++c) {
        std::vector<std::uint8_t> out(len, 0);
        for (std::size_t r = 0; r < e; ++r) gf256::mul_add(out, syn[r], inv[c * e + r]);
        shards[lost[c]] = std::move(out);
    }
    return true;
}

std::vector<Frame> fec_encode(std::span<const Frame> data_frames, const ReedSolomon& codec) {
    std::vector<std::vector<std::uint8_t>> data;
    data.reserve(data_frames.size());
    for (const Frame& f : data_frames) data.push_back(f.payload);
    auto parity = codec.encode(data);
    std::vector<Frame> out;
    out.reserve(parity.size());
    const std::uint32_t group = data_frames.empty() ? 0 : data_frames.front().group_id;
    for (std::uint32_t i = 0; i < parity.size(); ++i) {
        out.push_back({group, static_cast<std::uint8_t>(codec.data_count() + i), FrameKind::Parity,
                       std::move(parity[i])});
    }
    return out;
}

FecDecodeResult fec_decode(std::span<const Frame> frames, const ReedSolomon& codec) {
    const std::uint32_t k = codec.data_count();
    const std::uint32_t total = k + codec.parity_count();
    std::vector<std::optional<std::vector<std::uint8_t>>> shards(total);
    for (const Frame& f : frames) {
        if (f.index >= total) throw ProtocolError("fec: frame index " + std::to_string(f.index) + " out of range");
        if (!frames.empty() && f.group_id != frames.front().group_id) {
            throw ProtocolError("fec: frames from more than one group");
        }
        if (shards[f.index]) throw ProtocolError("fec: duplicate frame index " + std::to_string(f.index));
        shards[f.index] = f.payload;
    }
    std::vector<bool> had(k);
    for (std::uint32_t i = 0; i < k; ++i) had[i] = shards[i].has_value();

    FecDecodeResult res;
    res.complete = codec.reconstruct(shards);
    for (std::uint32_t i = 0; i < k; ++i) {
        if (!had[i]) (shards[i] ? res.recovered : res.missing).push_back(i);
    }
    shards.resize(k);
    res.data = std::move(shards);
    return res;
}

}  // namespace skyrx
