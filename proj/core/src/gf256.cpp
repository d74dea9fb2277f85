#include "skyrx/gf256.hpp"

#include <array>

#include "skyrx/errors.hpp"

namespace skyrx::gf256 {

namespace {

struct Tables {
    std::array<std::uint8_t, 512> exp{};
    std::array<int, 256> log{};
    std::array<std::array<std::uint8_t, 256>, 256> product{};

    Tables() {
        unsigned x = 1;
        for (int i = 0; i < 255; ++i) {
            exp[i] = static_cast<std::uint8_t>(x);
            log[x] = i;
            x <<= 1;
            if (x & 0x100u) x ^= 0x11Du;
        }
        for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
        for (unsigned a = 1; a < 256; ++a) {
            for (unsigned b = 1; b < 256; ++b) product[a][b] = exp[log[a] + log[b]];
        }
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

}  // namespace

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept { return tables().product[a][b]; }

std::uint8_t inv(std::uint8_t a) {
    if (a == 0) throw InvalidInput("gf256: zero has no inverse");
    const Tables& t = tables();
    return t.exp[255 - t.log[a]];
}

std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

void mul_add(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c) noexcept {
    if (c == 0) return;
    const auto& row = tables().product[c];
    const std::size_t n = dst.size() < src.size() ? dst.size() : src.size();
    if (c == 1) {
        for (std::size_t i = 0; i < n; ++i) dst[i] ^= src[i];
        return;
    }
    for (std::size_t i = 0; i < n; ++i) dst[i] ^= row[src[i]];
}

}  // namespace skyrx::gf256
