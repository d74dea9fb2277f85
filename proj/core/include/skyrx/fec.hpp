#pragma once

// Systematic Reed-Solomon erasure code over GF(2^8), applied independently to
// every byte column of a group of equal-length payloads. The parity rows form
// a Cauchy matrix, so any k of the k+m frames recover the k data payloads.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "skyrx/packet.hpp"

namespace skyrx {

inline constexpr std::uint32_t kFecData = 50;
inline constexpr std::uint32_t kFecParity = 25;

class ReedSolomon {
public:
    ReedSolomon(std::uint32_t data = kFecData, std::uint32_t parity = kFecParity);

    std::uint32_t data_count() const noexcept { return k_; }
    std::uint32_t parity_count() const noexcept { return m_; }
    std::uint8_t coefficient(std::uint32_t parity_row, std::uint32_t data_col) const noexcept {
        return cauchy_[parity_row * k_ + data_col];
    }

    std::vector<std::vector<std::uint8_t>> encode(std::span<const std::vector<std::uint8_t>> data) const;

    // shards[i] is the payload at group index i, or empty when erased.
    // Returns false, leaving shards untouched, when fewer than k are present.
    bool reconstruct(std::vector<std::optional<std::vector<std::uint8_t>>>& shards) const;

private:
    std::uint32_t k_;
    std::uint32_t m_;
    std::vector<std::uint8_t> cauchy_;  // m x k
};

struct FecDecodeResult {
    // One slot per data index; empty when the payload was lost and not recovered.
    std::vector<std::optional<std::vector<std::uint8_t>>> data;
    std::vector<std::uint32_t> recovered;  // data indices rebuilt from parity
    std::vector<std::uint32_t> missing;    // data indices still absent
    bool complete = false;
};

// Parity frames (indices k..k+m-1) for one group of k data frames.
std::vector<Frame> fec_encode(std::span<const Frame> data_frames, const ReedSolomon& codec = ReedSolomon());

// Frames must share a group id; duplicate indices raise ProtocolError.
FecDecodeResult fec_decode(std::span<const Frame> frames, const ReedSolomon& codec = ReedSolomon());

}  // namespace skyrx
