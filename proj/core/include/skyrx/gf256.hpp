#pragma once

// Arithmetic in GF(2^8) with the primitive polynomial x^8+x^4+x^3+x^2+1 (0x11D).

#include <cstdint>
#include <span>

namespace skyrx::gf256 {

std::uint8_t mul(std::uint8_t a, std::uint8_t b) noexcept;
std::uint8_t inv(std::uint8_t a);  // throws on zero
std::uint8_t div(std::uint8_t a, std::uint8_t b);
inline std::uint8_t add(std::uint8_t a, std::uint8_t b) noexcept { return a ^ b; }

// dst[i] ^= c * src[i]
void mul_add(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t c) noexcept;

}  // namespace skyrx::gf256
